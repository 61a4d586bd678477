#pragma once

#include <stdexcept>
#include <string>

namespace mosweb {

// Structural misuse: dimension mismatches, bad preconditions on shapes.
struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A named mathematical condition failed (condition D, condition E,
// non-resonance, tangency, ...). The name travels to the CLI exit code.
struct condition_error : std::runtime_error {
    std::string condition;
    condition_error(std::string cond, const std::string& what)
        : std::runtime_error(what), condition(std::move(cond)) {}
};

// Interval arithmetic could not decide a sign / zero test.
struct undetermined_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact backend asked for a value outside the Gaussian rationals.
struct not_representable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mosweb
