#pragma once

#include "core/dense.hpp"

namespace rpt {

struct DistanceReport {
    double uhlmann = 0.0;
    double frobenius_sq = 0.0;
};

namespace fid {

// Checks unit trace (1e-8) and positivity (eigenvalues >= -1e-9).
void validate_density(const DenseOperator& rho);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 between density operators.
double uhlmann(const DenseOperator& a, const DenseOperator& b);

// Squared Frobenius (Schatten-2) norm of a - b.
double frobenius_sq(const DenseOperator& a, const DenseOperator& b);

DistanceReport compare(const DenseOperator& a, const DenseOperator& b);

}  // namespace fid

}  // namespace rpt
