#pragma once

#include <Eigen/Dense>

#include "core/dense.hpp"
#include "core/rng.hpp"

namespace rpt::testutil {

// Matrix of iid standard complex Gaussians.
inline Mat ginibre(int d, Rng& rng) {
    Mat g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = cplx(rng.gaussian(), rng.gaussian());
    return g;
}

inline Mat random_hermitian(int d, Rng& rng) {
    Mat g = ginibre(d, rng);
    return 0.5 * (g + g.adjoint());
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// phases folded into Q.
inline Mat random_unitary(int d, Rng& rng) {
    Mat g = ginibre(d, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        cplx rc = r(c, c);
        double a = std::abs(rc);
        q.col(c) *= (a > 0 ? rc / a : cplx(1.0, 0.0));
    }
    return q;
}

// Full-rank random density matrix G G^dag / tr.
inline Mat random_density_mat(int d, Rng& rng) {
    Mat g = ginibre(d, rng);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace rpt::testutil
