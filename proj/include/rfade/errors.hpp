#pragma once

#include <stdexcept>
#include <string>

namespace rfade {

// Every library error carries a short machine-readable code; the CLI prints
// it as "error[<code>]: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct OrderDomainError : Error {
    explicit OrderDomainError(const std::string& what) : Error("order-domain", what) {}
};

struct AccuracyOrderError : Error {
    explicit AccuracyOrderError(const std::string& what) : Error("accuracy-order", what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& what) : Error("singular", what) {}
};

struct TruncationError : Error {
    explicit TruncationError(const std::string& what) : Error("truncation", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

struct UnsupportedComparisonError : Error {
    explicit UnsupportedComparisonError(const std::string& what)
        : Error("unsupported-comparison", what) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error("usage", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace rfade
