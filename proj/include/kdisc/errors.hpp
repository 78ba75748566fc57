#pragma once

#include <stdexcept>
#include <string>

namespace kdisc {

// Bad input: malformed polynomials, schema violations, out-of-range arguments.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure could not deliver its contract (divergence, rank
// ambiguity, vanishing symbol, ...).  The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace kdisc
