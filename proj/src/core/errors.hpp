#pragma once

#include <stdexcept>
#include <string>

namespace rpt {

// Dense-storage guard: operations refuse to materialize anything wider.
inline constexpr int kMaxDim = 1 << 12;

// A requested object exceeds the dense-storage cap.
struct dimension_error : std::invalid_argument {
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// Input data violates a documented integrity contract (normalization,
// hermiticity, positivity, completeness, double stochasticity, ...).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A text input could not be parsed; carries file:line context in the message.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed or produced out-of-contract residues.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rpt
