#pragma once

#include <stdexcept>
#include <string>

namespace opsched {

/// Base of every error raised by the library. `kind()` is a stable short tag
/// used by the CLI to map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

/// A closed-form inversion was asked for a ratio the dynamics never reach
/// (x = 1 by working, x = 0 by resting).
class UnreachableTarget : public Error {
public:
    explicit UnreachableTarget(const std::string& what) : Error("unreachable-target", what) {}
};

class InvalidInstance : public Error {
public:
    explicit InvalidInstance(const std::string& what) : Error("invalid-instance", what) {}
};

class SingularDerivative : public Error {
public:
    explicit SingularDerivative(const std::string& what) : Error("singular-derivative", what) {}
};

/// A (m, t1, t2) triple outside the two-policy budget domain. `bound()` names
/// the violated bound, e.g. "m_range", "t1_exceeds_w1", "x_bar_below_x_min".
class InfeasibleCombination : public Error {
public:
    InfeasibleCombination(std::string bound, const std::string& what)
        : Error("infeasible-combination", what), bound_(std::move(bound)) {}

    const std::string& bound() const noexcept { return bound_; }

private:
    std::string bound_;
};

class UnsupportedSize : public Error {
public:
    explicit UnsupportedSize(const std::string& what) : Error("unsupported-size", what) {}
};

/// Malformed input documents (instance/schedule/solution JSON).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error("format", what) {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("internal", what) {}
};

}  // namespace opsched
