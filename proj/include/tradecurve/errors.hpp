#pragma once

#include <exception>
#include <string>
#include <utility>

namespace tradecurve {

// Base class for all pipeline errors. code() is the stable machine-readable
// name that ends up in error JSON; what() is the human-readable message.
class Error : public std::exception {
public:
    Error(std::string code, std::string message)
        : code_(std::move(code)), message_(std::move(message)) {}

    const char* what() const noexcept override { return message_.c_str(); }
    const std::string& code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }

    // Year-aware callers (fit_year, run_series) tag errors with the year they
    // were processing. Only the first tag sticks.
    void attach_year(int year) {
        if (year_ >= 0) return;
        year_ = year;
        message_ = "year " + std::to_string(year) + ": " + message_;
    }
    int year() const noexcept { return year_; }

private:
    std::string code_;
    std::string message_;
    int year_ = -1;
};

#define TRADECURVE_ERROR_TYPE(Name)                                          \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(std::string message)                                   \
            : Error(#Name, std::move(message)) {}                            \
    }

// ingest
TRADECURVE_ERROR_TYPE(UnreadableSource);
TRADECURVE_ERROR_TYPE(SchemaMismatch);
TRADECURVE_ERROR_TYPE(DuplicateKey);
TRADECURVE_ERROR_TYPE(EmptyPanel);

// diversity
TRADECURVE_ERROR_TYPE(NoExports);
TRADECURVE_ERROR_TYPE(DegenerateRange);

// sigmoid_fit (NotConverged lives in sigmoid_fit.hpp; it carries a payload)
TRADECURVE_ERROR_TYPE(FlatData);
TRADECURVE_ERROR_TYPE(DegenerateInput);
TRADECURVE_ERROR_TYPE(StageUndefined);

// stages
TRADECURVE_ERROR_TYPE(InvalidParams);

// dynamics
TRADECURVE_ERROR_TYPE(InsufficientData);
TRADECURVE_ERROR_TYPE(AllYearsFailed);

// output plumbing
TRADECURVE_ERROR_TYPE(WriteFailed);

#undef TRADECURVE_ERROR_TYPE

}  // namespace tradecurve
