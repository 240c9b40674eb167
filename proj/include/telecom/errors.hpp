#pragma once

#include <stdexcept>
#include <string>

namespace telecom {

// Base class for all library errors. `code()` is a stable machine-readable
// tag used by the CLI when writing error records.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Invalid parameter or argument outside the mathematical domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

// Adaptive quadrature failed to reach the requested tolerance.
class IntegrationError : public Error {
public:
    explicit IntegrationError(const std::string& what) : Error("integration_failure", what) {}
};

// Numeric CDF inversion failed its accuracy target.
class InversionError : public Error {
public:
    explicit InversionError(const std::string& what) : Error("inversion_failure", what) {}
};

// An exponent exceeded the configured overflow cap.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

// Session-count boundary case where the multi-session constant is undefined.
class CriticalCaseError : public Error {
public:
    explicit CriticalCaseError(const std::string& what) : Error("critical_case", what) {}
};

// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// Expected workload exceeds a configured resource cap.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

}  // namespace telecom
