#pragma once

#include <stdexcept>
#include <string>

namespace bellkit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario is malformed (empty setting list, outcome count < 2, ...).
class InvalidScenarioError : public Error {
public:
    explicit InvalidScenarioError(const std::string& what) : Error(what) {}
};

/// Two objects that must share a scenario do not.
class ScenarioMismatchError : public Error {
public:
    explicit ScenarioMismatchError(const std::string& what) : Error(what) {}
};

/// A correlation table fails per-setting-pair normalization.
class UnnormalizedError : public Error {
public:
    explicit UnnormalizedError(const std::string& what) : Error(what) {}
};

/// H-representation describes an empty set where a nonempty one is required.
class EmptyPolytopeError : public Error {
public:
    explicit EmptyPolytopeError(const std::string& what) : Error(what) {}
};

/// H-representation describes an unbounded set where a polytope is required.
class UnboundedPolytopeError : public Error {
public:
    explicit UnboundedPolytopeError(const std::string& what) : Error(what) {}
};

/// Linear program has no feasible point.
class InfeasibleLpError : public Error {
public:
    explicit InfeasibleLpError(const std::string& what) : Error(what) {}
};

/// Linear program objective is unbounded above.
class UnboundedLpError : public Error {
public:
    explicit UnboundedLpError(const std::string& what) : Error(what) {}
};

/// Internal bookkeeping of an exact certificate failed to balance.
class CertificateError : public Error {
public:
    explicit CertificateError(const std::string& what) : Error(what) {}
};

/// An enumeration grew past the caller-imposed budget and was abandoned;
/// callers catch this to switch to a different strategy.
class EnumerationOverflowError : public Error {
public:
    explicit EnumerationOverflowError(const std::string& what) : Error(what) {}
};

/// Parse error in a text or JSON input.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace bellkit
