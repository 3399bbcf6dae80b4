#include "core/convergence.hpp"

#include <cmath>

#include "core/util.hpp"

namespace rpt {
namespace conv {

namespace {

struct MomentAcc {
    Eigen::VectorXd m2, m4;
    Eigen::MatrixXd outer;  // empty in diagonal-only runs

    MomentAcc& operator+=(const MomentAcc& o) {
        m2 += o.m2;
        m4 += o.m4;
        if (outer.size()) outer += o.outer;
        return *this;
    }
};

Eigen::VectorXd coeffs_of_sample(const SamplerSpec& spec, const RngStream& rng,
                                 std::int64_t index) {
    Rng g(rng.sub(static_cast<std::uint64_t>(index)));
    const StateVector psi = sample_state(spec, g);
    return pauli::decompose(projector(StateVector(psi.amp(), std::vector<int>(spec.n, 2))))
        .coeffs;
}

}  // namespace

ChiEstimate chi_monte_carlo(const SamplerSpec& spec, long samples, const RngStream& rng,
                            bool diag_only, int threads) {
    spec.validate();
    if (samples < 2) throw std::invalid_argument("chi estimation needs at least two samples");
    if (diag_only && spec.kind == SamplerKind::correlated_blocks)
        throw std::invalid_argument(
            "diagonal-only chi is invalid for the correlated sampler (no twirl symmetry)");
    if (!diag_only && spec.n > 4)
        throw dimension_error("full chi storage is capped at four qubits");
    const long nb = 1L << (2 * spec.n);

    MomentAcc acc = pairwise_accumulate_parallel<MomentAcc>(
        0, samples,
        [&](std::int64_t i) {
            const Eigen::VectorXd v = coeffs_of_sample(spec, rng, i);
            MomentAcc a;
            a.m2 = v.cwiseProduct(v);
            a.m4 = a.m2.cwiseProduct(a.m2);
            if (!diag_only) a.outer = v * v.transpose();
            return a;
        },
        threads, 64);

    const double inv = 1.0 / static_cast<double>(samples);
    ChiEstimate est;
    est.samples = samples;
    est.chi.n = spec.n;
    est.chi.basis = nb;
    est.chi.diagonal = diag_only;
    Eigen::VectorXd mean2 = acc.m2 * inv;
    Eigen::VectorXd mean4 = acc.m4 * inv;
    mean2(0) = 0.0;
    est.diag_se = ((mean4 - mean2.cwiseProduct(mean2)).cwiseMax(0.0) * inv).cwiseSqrt();
    est.diag_se(0) = 0.0;

    if (diag_only) {
        est.chi.diag = mean2;
        long arg = 0;
        est.sigma_max = mean2.maxCoeff(&arg);
        est.sigma_max_se = est.diag_se(arg);
        return est;
    }

    Eigen::MatrixXd chi = 0.5 * inv * (acc.outer + acc.outer.transpose());
    chi.row(0).setZero();
    chi.col(0).setZero();
    est.chi.full = chi;
    est.chi.diag = mean2;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chi);
    if (solver.info() != Eigen::Success) throw numeric_error("chi eigendecomposition failed");
    est.sigma_max = solver.eigenvalues().maxCoeff();
    const Eigen::VectorXd u = solver.eigenvectors().col(nb - 1);

    // Standard error of sigma_max: re-stream the identical sample sequence
    // and measure the variance of the projections onto the top direction.
    Eigen::Vector2d proj = pairwise_accumulate_parallel<Eigen::Vector2d>(
        0, samples,
        [&](std::int64_t i) {
            const Eigen::VectorXd v = coeffs_of_sample(spec, rng, i);
            double x = u.dot(v) - u(0) * v(0);
            x *= x;
            return Eigen::Vector2d(x, x * x);
        },
        threads, 64);
    const double xm = proj(0) * inv;
    const double xv = std::max(proj(1) * inv - xm * xm, 0.0);
    est.sigma_max_se = std::sqrt(xv * inv);
    return est;
}

ChiMatrix scale_shots(const ChiMatrix& chi, long nu) {
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    ChiMatrix out = chi;
    const double inv = 1.0 / static_cast<double>(nu);
    if (out.diag.size()) out.diag *= inv;
    if (out.full.size()) out.full *= inv;
    return out;
}

double sigma_max(const ChiMatrix& chi) {
    if (chi.diagonal || (chi.full.size() == 0 && chi.diag.size() != 0))
        return std::max(chi.diag.maxCoeff(), 0.0);
    if (chi.full.size() == 0) throw std::invalid_argument("empty chi matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (chi.full + chi.full.transpose()));
    if (solver.info() != Eigen::Success) throw numeric_error("chi eigendecomposition failed");
    return std::max(solver.eigenvalues().maxCoeff(), 0.0);
}

double thm1_rate(int n, int ell, long nu, int d) {
    if (n < 1) throw std::invalid_argument("qudit count must be positive");
    if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
    if (ell < 1 || ell > n || n % ell != 0)
        throw std::invalid_argument("block size must divide the qudit count");
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    const double dn = std::pow(static_cast<double>(d), n);
    const double dl = std::pow(static_cast<double>(d), ell);
    return 1.0 / (static_cast<double>(nu) * dn * (dl + 1.0));
}

double thm3_rate(const StateVector& state, long nu, int n) {
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    const int ell = state.qubit_count();
    if (n < ell || n % ell != 0)
        throw std::invalid_argument("state size must divide the total qubit count");
    const SubsetWeights w = pauli::weights(pauli::decompose(projector(state)));
    const double wmax = w.max_nonempty();
    if (ell == n) return wmax / static_cast<double>(nu);
    // Tensored blocks: weights multiply across blocks, so the dominant
    // nonempty subset takes the per-block maximum once and the larger of
    // (per-block maximum, identity weight 1/2^ell) everywhere else.
    const double wid = 1.0 / static_cast<double>(1L << ell);
    const int blocks = n / ell;
    double rate = wmax;
    for (int b = 1; b < blocks; ++b) rate *= std::max(wmax, wid);
    return rate / static_cast<double>(nu);
}

double thm4_bound(int n, int k0, long nu) {
    if (n < 1 || k0 < 0) throw std::invalid_argument("invalid uniformity parameters");
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    const double num = std::pow(2.0, k0 + 1) - 1.0;
    return num / (static_cast<double>(nu) * std::pow(2.0, n) * std::pow(3.0, k0 + 1));
}

ChiMatrix haar_chi_analytic(int d, long nu) {
    if (d < 1 || d > 64) throw std::invalid_argument("dimension out of range");
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    const long nb = static_cast<long>(d) * d;
    ChiMatrix chi;
    chi.basis = nb;
    int n = 0;
    while ((1 << n) < d) ++n;
    chi.n = ((1 << n) == d) ? n : 0;
    chi.diagonal = false;
    chi.full = Eigen::MatrixXd::Zero(nb, nb);
    const double c = 1.0 / (static_cast<double>(nu) * d * (d + 1.0));
    for (long i = 1; i < nb; ++i) chi.full(i, i) = c;
    chi.diag = chi.full.diagonal();
    return chi;
}

double error_bound(double p_norm, const ChiMatrix& chi) {
    if (p_norm < 0) throw std::invalid_argument("operator norm must be nonnegative");
    return std::sqrt(sigma_max(chi)) * p_norm;
}

}  // namespace conv
}  // namespace rpt
