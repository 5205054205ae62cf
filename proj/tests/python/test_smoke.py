"""End-to-end smoke checks for the python bindings."""

import json
import math
from pathlib import Path

import pytest

import matic

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"


def test_version_is_set():
    assert matic.__version__.count(".") == 2


def test_entropy_closed_forms():
    assert matic.entropy([0.25, 0.25, 0.25, 0.25]) == pytest.approx(2.0, abs=1e-12)
    assert matic.entropy({"a": 0.5, "b": 0.5}) == pytest.approx(1.0, abs=1e-12)
    assert matic.entropy({"a": 1.0}) == 0.0


def test_jensen_shannon_known_value():
    a = {"a": 0.25, "b": 0.25, "c": 0.25, "d": 0.25}
    b = {"a": 0.5, "b": 0.5}
    assert matic.jensen_shannon(a, b) == pytest.approx(0.31127812445913294, abs=1e-12)
    assert matic.jensen_shannon(a, a) == 0.0


def test_possibility_projection():
    out = matic.possibility_project({"a": 0.5, "b": 0.25, "c": 0.25}, {"a", "b"})
    assert out["a"] == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert out["b"] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert "c" not in out


def test_garage_inference():
    scenario = matic.garage_scenario()
    best = matic.infer_cause(scenario["corpus"], scenario["trace"], "e3")
    assert best["cause"] == "e2"
    assert best["context"] == []
    assert best["surprisal_bits"] == pytest.approx(0.15200309344504995, abs=1e-12)

    ranked = matic.rank_candidates(scenario["corpus"], scenario["trace"], "e3")
    assert len(ranked) == 4
    assert ranked[0] == best
    surprisals = [c["surprisal_bits"] for c in ranked]
    assert surprisals == sorted(surprisals)


def test_entropy_profile_collapses():
    scenario = matic.garage_scenario()
    profile = matic.entropy_profile(scenario["corpus"], scenario["trace"])
    assert [tick for tick, _ in profile] == [0, 1, 2]
    assert profile[0][1] == pytest.approx(2.2000290232794204, abs=1e-12)
    assert profile[2][1] == 0.0


def test_stationarity_over_ticks():
    scenario = matic.garage_scenario()
    report = matic.stationarity(scenario["corpus"], window=1)
    assert report["windows"] == 3
    assert report["verdict"] == "NonStationary"
    assert report["max_divergence_bits"] > 0.05


def test_formula_checks():
    good = matic.check_formula("x in [x, y]")
    assert good["stratified"] is True
    assert good["internal"] is True
    assert good["comprehensions"] == []

    bad = matic.check_formula("x in x")
    assert bad["stratified"] is False
    assert bad["cycle"][0] == bad["cycle"][-1] == "x"


def test_transfer_and_idealise():
    moved = matic.transfer("forall^st x . (gt0(x) -> exists n . geq1(n, x))")
    assert moved == "forall x . gt0(x) -> exists n . geq1(n, x)"

    with pytest.raises(matic.MaticError):
        matic.transfer(
            "forall^st n . limited(n)",
            set(),
            "def limited(n) := exists^st r . leq(n, r)",
        )

    ideal = matic.idealise("forall^stfin y' . exists x . forall y . y in A(y')")
    assert ideal == "exists x . forall^st y . y in A(y)"


def test_receiver_agrees_with_theory():
    assert matic.closed_form_ber(0.0) == pytest.approx(0.07864960352514257, abs=1e-12)
    # 8 dB over a couple thousand symbols: essentially error-free
    assert matic.receiver_error_rate(8.0, symbols=2000, seed=5) < 0.005
    assert matic.receiver_error_rate(8.0, symbols=2000, seed=5) == matic.receiver_error_rate(
        8.0, symbols=2000, seed=5
    )


def test_bandit_prefers_paying_arm():
    assert matic.bandit_greedy_arm([1.0, 0.0], seed=3) == 0
    assert matic.bandit_greedy_arm([0.0, 1.0], seed=3) == 1


def test_run_dispatch_matches_cli_shape():
    out = matic.run("net-check", {"net": str(SCENARIOS / "net_pipeline.json")}, seed=7)
    summary = json.loads(out["summary"])
    assert summary["command"] == "net-check"
    assert summary["seed"] == 7
    assert summary["results"]["acyclic"] is True
    assert summary["results"]["levels"]["decide"] == 3
    assert out["metrics"].startswith("node,") or "," in out["metrics"]

    again = matic.run("net-check", {"net": str(SCENARIOS / "net_pipeline.json")}, seed=7)
    assert again["summary"] == out["summary"]


def test_run_rejects_unknown_command():
    with pytest.raises(matic.MaticError):
        matic.run("frobnicate")
