#include "core/sampling.hpp"

#include <cmath>

#include "core/util.hpp"

namespace rpt {

SamplerSpec SamplerSpec::haar(int n, int ell) {
    SamplerSpec s;
    s.kind = SamplerKind::haar_blocks;
    s.n = n;
    s.ell = ell;
    s.validate();
    return s;
}

SamplerSpec SamplerSpec::rotated(StateVector base) {
    SamplerSpec s;
    s.kind = SamplerKind::fixed_rotated;
    s.n = base.qubit_count();
    s.ell = 1;
    s.base = std::move(base);
    s.validate();
    return s;
}

SamplerSpec SamplerSpec::correlated(int n, int ell) {
    SamplerSpec s;
    s.kind = SamplerKind::correlated_blocks;
    s.n = n;
    s.ell = ell;
    s.validate();
    return s;
}

void SamplerSpec::validate() const {
    if (n < 1 || n > 12) throw dimension_error("sampler qubit count out of range");
    if (kind == SamplerKind::fixed_rotated) {
        if (base.dim() != (1L << n)) throw std::invalid_argument("sampler base state has wrong dimension");
        return;
    }
    if (ell < 1 || ell > n) throw std::invalid_argument("block size must satisfy 1 <= ell <= n");
    if (n % ell != 0) throw std::invalid_argument("block size must divide the qubit count");
}

namespace haar {

StateVector haar_state(int dim, Rng& rng) {
    if (dim < 1 || dim > kMaxDim) throw dimension_error("state dimension out of range");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(rng.gaussian(), rng.gaussian());
    const double nrm = v.norm();
    if (nrm < 1e-30) throw numeric_error("degenerate Gaussian draw");
    return StateVector(v / nrm, {dim});
}

Mat random_su2(Rng& rng) {
    // Gram-Schmidt on a 2x2 complex Gaussian matrix gives a Haar-random
    // U(2) element when the R factor has a real positive diagonal; dividing
    // out the determinant phase lands in SU(2).
    Mat g(2, 2);
    for (int i = 0; i < 4; ++i) g(i / 2, i % 2) = cplx(rng.gaussian(), rng.gaussian());
    Vec c0 = g.col(0);
    const double n0 = c0.norm();
    if (n0 < 1e-30) throw numeric_error("degenerate Gaussian draw");
    c0 /= n0;
    Vec c1 = g.col(1) - (c0.adjoint() * g.col(1))(0) * c0;
    const double n1 = c1.norm();
    if (n1 < 1e-30) throw numeric_error("degenerate Gaussian draw");
    c1 /= n1;
    Mat u(2, 2);
    u.col(0) = c0;
    u.col(1) = c1;
    const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    return u * std::exp(cplx(0.0, -0.5 * std::arg(det)));
}

DenseOperator random_local_rotations(int n, Rng& rng) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    DenseOperator out(random_su2(rng), {2});
    for (int q = 1; q < n; ++q) out = kron(out, DenseOperator(random_su2(rng), {2}));
    return out;
}

double moment_complex(int d, const std::vector<int>& r) {
    if (d < 1 || d > 4096) throw std::invalid_argument("dimension out of range for moments");
    if (static_cast<int>(r.size()) > d)
        throw std::invalid_argument("moment multi-index has more entries than the dimension");
    long k = 0;
    double log_num = 0.0;
    for (int ri : r) {
        if (ri < 0) throw std::invalid_argument("moment orders must be non-negative");
        k += ri;
        log_num += std::lgamma(ri + 1.0);
    }
    if (k > 64) throw std::invalid_argument("total moment order too large");
    // prod r_i! * (d-1)! / (d+k-1)!
    return std::exp(log_num + std::lgamma(static_cast<double>(d)) -
                    std::lgamma(static_cast<double>(d) + k));
}

namespace {

// Reciprocal-sum normalization for real-sphere moments: the target moment
// C_s equals 1 over the sum, across all compositions c of k into d parts, of
//   k! prod_i s_i! / prod_i c_i!^2 * prod_i (2c_i)! / prod_i (2s_i)!.
double real_moment_denominator(int d, long k, const std::vector<int>& target) {
    double lg_fixed = std::lgamma(k + 1.0);
    for (int i = 0; i < d; ++i) {
        const int si = i < static_cast<int>(target.size()) ? target[i] : 0;
        lg_fixed += std::lgamma(si + 1.0) - std::lgamma(2.0 * si + 1.0);
    }
    std::vector<int> c(d, 0);
    c[0] = static_cast<int>(k);
    double total = 0.0;
    while (true) {
        double lg = lg_fixed;
        for (int i = 0; i < d; ++i)
            lg += std::lgamma(2.0 * c[i] + 1.0) - 2.0 * std::lgamma(c[i] + 1.0);
        total += std::exp(lg);
        // Advance to the next composition of k; entries right of the pivot
        // are all zero except possibly the last one.
        int i = d - 2;
        while (i >= 0 && c[i] == 0) --i;
        if (i < 0) break;
        --c[i];
        const int tail = c[d - 1] + 1;
        c[d - 1] = 0;
        c[i + 1] = tail;
    }
    return total;
}

}  // namespace

double moment_real(int d, const std::vector<int>& r) {
    if (d < 1 || d > 64) throw std::invalid_argument("dimension out of range for real moments");
    if (static_cast<int>(r.size()) > d)
        throw std::invalid_argument("moment multi-index has more entries than the dimension");
    long k = 0;
    for (int ri : r) {
        if (ri < 0) throw std::invalid_argument("moment orders must be non-negative");
        k += ri;
    }
    if (k > 8) throw std::invalid_argument("total moment order too large");
    if (k == 0) return 1.0;
    return 1.0 / real_moment_denominator(d, k, r);
}

}  // namespace haar

StateVector sample_state(const SamplerSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
        case SamplerKind::haar_blocks: {
            const int blocks = spec.n / spec.ell;
            StateVector psi = haar::haar_state(1 << spec.ell, rng);
            psi = StateVector(psi.amp(), std::vector<int>(spec.ell, 2));
            for (int b = 1; b < blocks; ++b) {
                StateVector blk = haar::haar_state(1 << spec.ell, rng);
                psi = kron(psi, StateVector(blk.amp(), std::vector<int>(spec.ell, 2)));
            }
            return psi;
        }
        case SamplerKind::fixed_rotated: {
            const DenseOperator u = haar::random_local_rotations(spec.n, rng);
            return StateVector(u.mat() * spec.base.amp(), spec.base.factor_dims(), false, 1e-9);
        }
        case SamplerKind::correlated_blocks: {
            const int blocks = spec.n / spec.ell;
            StateVector blk = haar::haar_state(1 << spec.ell, rng);
            blk = StateVector(blk.amp(), std::vector<int>(spec.ell, 2));
            StateVector psi = blk;
            for (int b = 1; b < blocks; ++b) psi = kron(psi, blk);
            return psi;
        }
    }
    throw std::invalid_argument("unknown sampler kind");
}

DenseOperator ensemble_average(const SamplerSpec& spec, long samples, const RngStream& shots,
                               int threads) {
    spec.validate();
    if (samples < 1) throw std::invalid_argument("sample count must be positive");
    const long d = 1L << spec.n;
    Mat sum = pairwise_accumulate_parallel<Mat>(
        0, samples,
        [&](std::int64_t i) {
            Rng rng(shots.sub(static_cast<std::uint64_t>(i)));
            const StateVector psi = sample_state(spec, rng);
            return Mat(psi.amp() * psi.amp().adjoint());
        },
        threads, 64);
    return DenseOperator::qubits(sum / static_cast<double>(samples), spec.n);
}

}  // namespace rpt
