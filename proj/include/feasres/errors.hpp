#pragma once

#include <stdexcept>
#include <string>

namespace feasres {

// Base for every engine failure that is meant to be caught and reported.
struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& m) : std::runtime_error(m) {}
};

// A monomial does not descend to the requested blowup chart with integral
// exponents, i.e. the weight vector and the polynomial are incompatible.
struct NonIntegralExponent : EngineError {
    explicit NonIntegralExponent(const std::string& m) : EngineError(m) {}
};

// Squarefree decomposition of the zero form was requested.
struct ZeroForm : EngineError {
    explicit ZeroForm(const std::string& m) : EngineError(m) {}
};

// The germ matches no class template the engine knows.
struct Unclassifiable : EngineError {
    explicit Unclassifiable(const std::string& m) : EngineError(m) {}
};

// A normal form computation did not stabilize below the truncation order.
struct TruncationInsufficient : EngineError {
    explicit TruncationInsufficient(const std::string& m) : EngineError(m) {}
};

// A coordinate change needs a root that does not exist over Q.
struct IrrationalChange : EngineError {
    explicit IrrationalChange(const std::string& m) : EngineError(m) {}
};

// A hypothesis of the requested test is not met by the input.
struct HypothesisViolated : EngineError {
    explicit HypothesisViolated(const std::string& m) : EngineError(m) {}
};

// Computed discrepancy of a blowup disagrees with the planned one.
struct DiscrepancyMismatch : EngineError {
    explicit DiscrepancyMismatch(const std::string& m) : EngineError(m) {}
};

// A singular point of a chart is not rational, so it cannot be recentered.
struct IrrationalCenter : EngineError {
    explicit IrrationalCenter(const std::string& m) : EngineError(m) {}
};

// The finite field scan found a singular point outside the symbolic
// candidate set. This is a hard failure: the symbolic locator is wrong.
struct OracleEscape : EngineError {
    explicit OracleEscape(const std::string& m) : EngineError(m) {}
};

// No case of the dispatch table applies to a classified germ.
struct NoRuleFired : EngineError {
    explicit NoRuleFired(const std::string& m) : EngineError(m) {}
};

// Resolution exceeded the configured depth bound.
struct DepthExceeded : EngineError {
    explicit DepthExceeded(const std::string& m) : EngineError(m) {}
};

// A requested oracle prime divides data it must not divide.
struct BadPrime : EngineError {
    explicit BadPrime(const std::string& m) : EngineError(m) {}
};

// Malformed textual input, with position information.
struct ParseError : EngineError {
    ParseError(const std::string& m, int line_, int column_)
        : EngineError(m + " (line " + std::to_string(line_) + ", column " +
                      std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

}  // namespace feasres
