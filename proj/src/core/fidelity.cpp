#include "core/fidelity.hpp"

#include <cmath>

namespace rpt {
namespace fid {

void validate_density(const DenseOperator& rho) {
    if (std::abs(rho.mat().trace().real() - 1.0) > 1e-8 ||
        std::abs(rho.mat().trace().imag()) > 1e-8)
        throw validation_error("density operator does not have unit trace");
    const EigResult e = herm_eig(rho);
    if (e.values.minCoeff() < -1e-9)
        throw validation_error("density operator has a negative eigenvalue");
}

double uhlmann(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("density operators have different dimensions");
    validate_density(a);
    validate_density(b);
    const EigResult ea = herm_eig(a);
    Eigen::VectorXd sq = ea.values.cwiseMax(0.0).cwiseSqrt();
    const Mat root = ea.vectors * sq.asDiagonal() * ea.vectors.adjoint();
    const DenseOperator inner(Mat(root * b.mat() * root), a.factor_dims());
    // inner is PSD up to roundoff; clamp before the square roots.
    const EigResult em = herm_eig(inner, 1e-8);
    double tr = 0.0;
    for (long i = 0; i < em.values.size(); ++i) tr += std::sqrt(std::max(em.values(i), 0.0));
    return tr * tr;
}

double frobenius_sq(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operators have different dimensions");
    return (a.mat() - b.mat()).squaredNorm();
}

DistanceReport compare(const DenseOperator& a, const DenseOperator& b) {
    return DistanceReport{uhlmann(a, b), frobenius_sq(a, b)};
}

}  // namespace fid
}  // namespace rpt
