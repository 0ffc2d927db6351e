#ifndef SARFORGE_ERRORS_HPP
#define SARFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sarforge {

/// Process exit codes. Stable across releases; the CLI maps exceptions onto these.
struct ExitStatus {
    static constexpr int ok = 0;
    static constexpr int config_error = 2;
    static constexpr int io_error = 3;
    static constexpr int placement_error = 4;
    static constexpr int eval_error = 5;
};

class Error : public std::runtime_error {
public:
    Error(std::string message, int exit_code)
        : std::runtime_error(std::move(message)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

/// Invalid configuration or parameter domain violation.
class ConfigError : public Error {
public:
    explicit ConfigError(std::string message)
        : Error(std::move(message), ExitStatus::config_error) {}
};

/// Filesystem and stream failures.
class IoError : public Error {
public:
    explicit IoError(std::string message)
        : Error(std::move(message), ExitStatus::io_error) {}
};

/// Malformed file contents (bad magic, dimension overflow).
class FormatError : public IoError {
public:
    explicit FormatError(std::string message) : IoError(std::move(message)) {}
};

/// Target placement could not be satisfied within the attempt budget.
class PlacementError : public Error {
public:
    explicit PlacementError(std::string message)
        : Error(std::move(message), ExitStatus::placement_error) {}
};

/// Auto-labelling failed (empty target support).
class AnnotationError : public Error {
public:
    explicit AnnotationError(std::string message)
        : Error(std::move(message), ExitStatus::placement_error) {}
};

/// Evaluation is undefined for the given inputs (e.g. zero ground truths).
class EvalError : public Error {
public:
    explicit EvalError(std::string message)
        : Error(std::move(message), ExitStatus::eval_error) {}
};

}  // namespace sarforge

#endif  // SARFORGE_ERRORS_HPP
