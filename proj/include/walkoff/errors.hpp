#pragma once

#include <stdexcept>
#include <string>

namespace walkoff {

// Base for all library errors; what() is a single line, machine-parsable as
// "category: detail".
class Error : public std::runtime_error {
public:
    Error(const std::string& category, const std::string& detail)
        : std::runtime_error(category + ": " + detail), category_(category) {}
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

// Invalid construction input; names the offending field.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& detail) : Error("invalid parameter", detail) {}
};

// Grid/axis shape mismatch between operands.
class DomainMismatch : public Error {
public:
    explicit DomainMismatch(const std::string& detail) : Error("domain mismatch", detail) {}
};

// Phase-space momentum window fails the boundary-support requirement.
class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& detail) : Error("window too small", detail) {}
};

// Closed-form width model evaluated outside its validity region.
class OutOfValidity : public Error {
public:
    explicit OutOfValidity(const std::string& detail) : Error("out of validity", detail) {}
};

// Section/profile fit failed to converge on any start.
class FitFailed : public Error {
public:
    FitFailed(const std::string& detail, double best_residual)
        : Error("fit failed", detail), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

// Malformed input file; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& detail, long line = 0)
        : Error("parse error", line > 0 ? "line " + std::to_string(line) + ": " + detail : detail),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Bad run configuration (missing key, invalid value, unknown mode).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& detail) : Error("config error", detail) {}
};

// Filesystem-level output failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& detail) : Error("io error", detail) {}
};

}  // namespace walkoff
