"""Python surface for the matic core.

Compound inputs (traces, corpora, modules, networks) are passed as JSON text,
in exactly the shapes the CLI reads from disk.
"""

try:
    from matic._matic import *  # noqa: F401,F403  (installed layout)
    from matic._matic import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _matic import *  # noqa: F401,F403
    from _matic import __version__  # noqa: F401
