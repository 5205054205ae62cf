#pragma once

#include <stdexcept>
#include <string>

namespace matic {

// Exit-code categories used by the CLI: config 2, data 3, internal 4.
enum class ErrorCategory { Config, Data, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), cat_(cat), code_(std::move(code)) {}

    ErrorCategory category() const { return cat_; }
    const std::string& code() const { return code_; }

private:
    ErrorCategory cat_;
    std::string code_;
};

#define MATIC_DEFINE_ERROR(NAME, CATEGORY)                                    \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& msg)                                 \
            : Error(ErrorCategory::CATEGORY, #NAME, msg) {}                   \
    }

MATIC_DEFINE_ERROR(ConfigError, Config);
MATIC_DEFINE_ERROR(DataError, Data);
MATIC_DEFINE_ERROR(InternalError, Internal);

// event_model
MATIC_DEFINE_ERROR(EmptyChain, Data);
MATIC_DEFINE_ERROR(UnknownEvent, Data);

// gcm_core
MATIC_DEFINE_ERROR(ArityMismatch, Data);
MATIC_DEFINE_ERROR(LengthMismatch, Data);

// cognet
MATIC_DEFINE_ERROR(CircularSystem, Data);
MATIC_DEFINE_ERROR(UnknownNode, Data);

// implicature_engine
MATIC_DEFINE_ERROR(UntrainedModel, Data);
MATIC_DEFINE_ERROR(NoCandidates, Data);

// infometrics
MATIC_DEFINE_ERROR(InvalidDistribution, Data);
MATIC_DEFINE_ERROR(EmptySupport, Data);
MATIC_DEFINE_ERROR(InsufficientData, Data);

// ist_logic
MATIC_DEFINE_ERROR(SyntaxError, Data);
MATIC_DEFINE_ERROR(PatternMismatch, Data);
MATIC_DEFINE_ERROR(UnboundVariable, Data);
MATIC_DEFINE_ERROR(AllStandard, Data);
MATIC_DEFINE_ERROR(IllegalSetFormation, Data);

#undef MATIC_DEFINE_ERROR

// Why Transference was refused.
enum class TransferFault { ExternalFormula, NonStandardParameter };

class IllegalTransfer : public Error {
public:
    IllegalTransfer(TransferFault fault, const std::string& msg)
        : Error(ErrorCategory::Data, "IllegalTransfer", msg), fault_(fault) {}

    TransferFault fault() const { return fault_; }

    const char* fault_name() const {
        return fault_ == TransferFault::ExternalFormula ? "ExternalFormula"
                                                        : "NonStandardParameter";
    }

private:
    TransferFault fault_;
};

}  // namespace matic
