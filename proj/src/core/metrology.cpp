#include "core/metrology.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/KroneckerProduct>

#include "core/errors.hpp"
#include "core/fidelity.hpp"
#include "core/util.hpp"

namespace rpt {
namespace metro {

namespace {

constexpr double kGapCutoff = 1e-10;

// Solve {L, rho}/2 = target in rho's eigenbasis, dropping modes whose
// eigenvalue pair sums below the cutoff (support-kernel blocks).
SldOperator anticommutator_solve(const DenseOperator& rho, const DenseOperator& target) {
    if (rho.dim() != target.dim())
        throw dimension_error("operator dimensions do not match for the SLD solve");
    fid::validate_density(rho);
    const EigResult eig = herm_eig(rho, 1e-8);
    const Mat t = eig.vectors.adjoint() * target.mat() * eig.vectors;
    const long d = rho.dim();
    Mat lbar = Mat::Zero(d, d);
    int zeroed = 0;
    for (long m = 0; m < d; ++m) {
        for (long n = 0; n < d; ++n) {
            const double gap = eig.values(m) + eig.values(n);
            if (gap < kGapCutoff) {
                ++zeroed;
                continue;
            }
            lbar(m, n) = 2.0 * t(m, n) / gap;
        }
    }
    const Mat l = eig.vectors * lbar * eig.vectors.adjoint();
    return SldOperator{DenseOperator(l, rho.factor_dims()).hermitized(), zeroed};
}

// Phi parameters of the phase rotation by theta about z.
PhiParams phase_phi(double theta) {
    PhiParams p;
    p.phi(0, 0) = 0.5 * std::cos(theta);
    p.phi(1, 1) = 0.5 * std::cos(theta);
    p.phi(0, 1) = 0.5 * std::sin(theta);
    p.phi(1, 0) = -0.5 * std::sin(theta);
    p.phi(2, 2) = 0.5;
    return p;
}

void check_protocol_size(int nu) {
    if (nu < 2 || nu > 10) throw dimension_error("protocol register count out of range");
}

}  // namespace

SldOperator sld(const DenseOperator& rho, const DenseOperator& drho) {
    if (drho.hermiticity_residue() > 1e-10)
        throw std::invalid_argument("state derivative is not Hermitian");
    if (std::abs(drho.mat().trace()) > 1e-9)
        throw std::invalid_argument("state derivative is not traceless");
    return anticommutator_solve(rho, drho);
}

SldOperator dual(const DenseOperator& rho, long pauli_index) {
    const int n = rho.qubit_count();
    return anticommutator_solve(rho, pauli::string_matrix(pauli_index, n));
}

Eigen::MatrixXd fisher(const DenseOperator& rho, const std::vector<DenseOperator>& drhos) {
    if (drhos.empty()) throw std::invalid_argument("no derivatives supplied");
    std::vector<SldOperator> slds;
    slds.reserve(drhos.size());
    for (const DenseOperator& d : drhos) slds.push_back(sld(rho, d));
    const long p = static_cast<long>(slds.size());
    Eigen::MatrixXd f(p, p);
    for (long a = 0; a < p; ++a) {
        for (long b = a; b < p; ++b) {
            const double v = (slds[a].op.mat() * slds[b].op.mat() * rho.mat()).trace().real();
            f(a, b) = v;
            f(b, a) = v;
        }
    }
    return f;
}

Eigen::MatrixXd fisher_via_duals(const DenseOperator& rho,
                                 const std::vector<DenseOperator>& drhos) {
    if (drhos.empty()) throw std::invalid_argument("no derivatives supplied");
    const int n = rho.qubit_count();
    if (n > 2) throw dimension_error("dual-basis Fisher assembly is capped at two qubits");
    const long nb = 1L << (2 * n);
    std::vector<DenseOperator> duals;
    duals.reserve(nb);
    for (long i = 0; i < nb; ++i) duals.push_back(dual(rho, i).op);

    std::vector<Mat> ls;
    ls.reserve(drhos.size());
    for (const DenseOperator& d : drhos) {
        if (d.dim() != rho.dim())
            throw dimension_error("operator dimensions do not match for the SLD solve");
        const PauliVector dv = pauli::decompose(d);
        Mat l = Mat::Zero(rho.dim(), rho.dim());
        // The identity component of a traceless derivative vanishes; start at 1.
        for (long i = 1; i < nb; ++i) l += cplx(dv.coeffs(i), 0.0) * duals[i].mat();
        ls.push_back(l);
    }
    const long p = static_cast<long>(ls.size());
    Eigen::MatrixXd f(p, p);
    for (long a = 0; a < p; ++a) {
        for (long b = a; b < p; ++b) {
            const double v = (ls[a] * ls[b] * rho.mat()).trace().real();
            f(a, b) = v;
            f(b, a) = v;
        }
    }
    return f;
}

double sensitivity_proxy(const std::function<Eigen::VectorXcd(double)>& curve, double phi,
                         double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    const auto diff_sq = [&](double h) {
        const Eigen::VectorXcd hi = curve(phi + h);
        const Eigen::VectorXcd lo = curve(phi - h);
        if (hi.size() != lo.size() || hi.size() == 0)
            throw std::invalid_argument("curve returned inconsistently sized vectors");
        return ((hi - lo) / (2.0 * h)).squaredNorm();
    };
    const double full = diff_sq(step);
    const double half = diff_sq(0.5 * step);
    if (std::abs(full - half) > 1e-6 * std::max(1.0, std::abs(half)))
        throw numeric_error("central difference failed its half-step consistency check");
    return half;
}

double sensitivity_proxy(const Eigen::VectorXcd& dcurve) {
    if (dcurve.size() == 0) throw std::invalid_argument("empty derivative vector");
    return dcurve.squaredNorm();
}

ChoiMatrix phase_channel_choi(double phi) {
    Mat u = Mat::Zero(2, 2);
    u(0, 0) = std::exp(cplx(0.0, -0.5 * phi));
    u(1, 1) = std::exp(cplx(0.0, 0.5 * phi));
    return choi::from_unitary(DenseOperator::qubits(u, 1));
}

PauliVector ghz_pauli(int nu) {
    check_protocol_size(nu);
    PauliVector v;
    v.n = nu;
    v.coeffs = Eigen::VectorXd::Zero(1L << (2 * nu));
    const double amp = 1.0 / std::sqrt(static_cast<double>(1L << nu));
    for (long b = 0; b < (1L << nu); ++b) {
        const int k = popcount32(static_cast<uint32_t>(b));
        long idx_zz = 0;  // digits in {0, 3}
        long idx_xy = 0;  // digits in {1, 2}
        for (int q = 0; q < nu; ++q) {
            const int bit = static_cast<int>((b >> (nu - 1 - q)) & 1);
            idx_zz = idx_zz * 4 + (bit ? 3 : 0);
            idx_xy = idx_xy * 4 + (bit ? 2 : 1);
        }
        if (k % 2 == 0) {
            v.coeffs(idx_zz) = amp;
            v.coeffs(idx_xy) = ((k / 2) % 2 == 0) ? amp : -amp;
        }
    }
    return v;
}

PauliVector ghz_protocol_final_state(const PhiParams& phi, int nu) {
    check_protocol_size(nu);
    PauliVector v;
    v.n = nu;
    v.coeffs = Eigen::VectorXd::Zero(1L << (2 * nu));
    const double amp = 1.0 / std::sqrt(static_cast<double>(1L << nu));
    const double zz = 2.0 * phi.phi(2, 2);
    const cplx alpha(2.0 * phi.phi(0, 0), 2.0 * phi.phi(1, 0));
    const cplx beta(2.0 * phi.phi(0, 1), 2.0 * phi.phi(1, 1));
    for (long b = 0; b < (1L << nu); ++b) {
        const int k = popcount32(static_cast<uint32_t>(b));
        long idx_zz = 0;
        long idx_xy = 0;
        cplx tail(1.0, 0.0);
        for (int q = 0; q < nu; ++q) {
            const int bit = static_cast<int>((b >> (nu - 1 - q)) & 1);
            idx_zz = idx_zz * 4 + (bit ? 3 : 0);
            idx_xy = idx_xy * 4 + (bit ? 2 : 1);
            tail *= bit ? beta : alpha;
        }
        if (k % 2 == 0) v.coeffs(idx_zz) = amp * std::pow(zz, k);
        v.coeffs(idx_xy) = amp * tail.real();
    }
    return v;
}

Eigen::VectorXcd ghz_phase_component(const PhiParams& phi, int nu) {
    check_protocol_size(nu);
    const double amp = 0.5 / std::sqrt(static_cast<double>(1L << nu));
    const cplx alpha(2.0 * phi.phi(0, 0), 2.0 * phi.phi(1, 0));
    const cplx beta(2.0 * phi.phi(0, 1), 2.0 * phi.phi(1, 1));
    Eigen::VectorXcd c(1L << nu);
    for (long b = 0; b < (1L << nu); ++b) {
        cplx tail(amp, 0.0);
        for (int q = 0; q < nu; ++q) tail *= ((b >> q) & 1) ? beta : alpha;
        c(b) = tail;
    }
    return c;
}

std::function<Eigen::VectorXcd(double)> ghz_proxy_curve(int nu) {
    check_protocol_size(nu);
    return [nu](double theta) { return ghz_phase_component(phase_phi(theta), nu); };
}

std::function<Eigen::VectorXcd(double)> separable_proxy_curve(int nu) {
    check_protocol_size(nu);
    return [nu](double theta) {
        Eigen::Vector4cd u;
        const double r = 1.0 / std::sqrt(2.0);
        u << cplx(r, 0), cplx(r * std::cos(theta), 0), cplx(r * std::sin(theta), 0), cplx(0, 0);
        Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
        for (int q = 0; q < nu; ++q) w = Eigen::kroneckerProduct(w, u).eval();
        return w;
    };
}

Eigen::VectorXcd ghz_proxy_derivative(int nu, double theta) {
    check_protocol_size(nu);
    // Every phase-component amplitude carries exp(-i nu theta).
    return cplx(0.0, -static_cast<double>(nu)) * ghz_phase_component(phase_phi(theta), nu);
}

Eigen::VectorXcd separable_proxy_derivative(int nu, double theta) {
    check_protocol_size(nu);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd u, du;
    u << cplx(r, 0), cplx(r * std::cos(theta), 0), cplx(r * std::sin(theta), 0), cplx(0, 0);
    du << cplx(0, 0), cplx(-r * std::sin(theta), 0), cplx(r * std::cos(theta), 0), cplx(0, 0);
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(1L << (2 * nu));
    for (int q = 0; q < nu; ++q) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
        for (int j = 0; j < nu; ++j)
            w = Eigen::kroneckerProduct(w, j == q ? du : u).eval();
        total += w;
    }
    return total;
}

}  // namespace metro
}  // namespace rpt
