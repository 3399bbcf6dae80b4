#include "core/pauli.hpp"

#include <cmath>

#include "core/util.hpp"

namespace rpt {

double SubsetWeights::max_nonempty() const {
    double m = 0.0;
    for (long s = 1; s < w.size(); ++s) m = std::max(m, w(s));
    return m;
}

Eigen::VectorXd SubsetWeights::level_sums() const {
    Eigen::VectorXd lv = Eigen::VectorXd::Zero(n + 1);
    double scale3 = 1.0;
    std::vector<double> pow3(n + 1);
    for (int k = 0; k <= n; ++k) {
        pow3[k] = scale3;
        scale3 *= 3.0;
    }
    for (long s = 0; s < w.size(); ++s) {
        const int k = popcount32(static_cast<std::uint32_t>(s));
        lv(k) += pow3[k] * w(s);
    }
    return lv;
}

double SubsetWeights::weighted_total() const { return level_sums().sum(); }

namespace pauli {

namespace {

constexpr double kImagResidueTol = 1e-8;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_qubit_op(const DenseOperator& op, int& n) {
    n = op.qubit_count();
    if (n > 12) throw dimension_error("qubit count out of range for Pauli transform");
}

}  // namespace

// The transform works on the operator entries packed by per-qubit index
// pairs: position m has crumb m_q = 2 r_q + c_q for qubit q, with qubit 1
// most significant.  One radix-4 butterfly per qubit maps the (row, col)
// pair basis to the normalized Pauli basis.
PauliVector decompose(const DenseOperator& op) {
    int n = 0;
    check_qubit_op(op, n);
    const long d = 1L << n;
    const long size = d * d;

    std::vector<cplx> a(size);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) {
            long m = 0;
            for (int q = 0; q < n; ++q) {
                const int rq = static_cast<int>((r >> (n - 1 - q)) & 1);
                const int cq = static_cast<int>((c >> (n - 1 - q)) & 1);
                m = (m << 2) | (rq << 1) | cq;
            }
            a[m] = op.mat()(r, c);
        }

    // Per-qubit butterfly: (a00, a01, a10, a11) -> coefficients of
    // (id, x, y, z) / sqrt(2) for that qubit.
    for (int q = 0; q < n; ++q) {
        const long stride = 1L << (2 * (n - 1 - q));
        for (long base = 0; base < size; base += 4 * stride) {
            for (long off = 0; off < stride; ++off) {
                const long i00 = base + off;
                const long i01 = i00 + stride;
                const long i10 = i00 + 2 * stride;
                const long i11 = i00 + 3 * stride;
                const cplx a00 = a[i00], a01 = a[i01], a10 = a[i10], a11 = a[i11];
                a[i00] = (a00 + a11) * kInvSqrt2;
                a[i01] = (a01 + a10) * kInvSqrt2;
                a[i10] = cplx(0, 1) * (a01 - a10) * kInvSqrt2;
                a[i11] = (a00 - a11) * kInvSqrt2;
            }
        }
    }

    PauliVector out{n, Eigen::VectorXd(size)};
    double worst = 0.0;
    for (long i = 0; i < size; ++i) {
        worst = std::max(worst, std::abs(a[i].imag()));
        out.coeffs(i) = a[i].real();
    }
    if (worst > kImagResidueTol)
        throw numeric_error("Pauli coefficients have a non-negligible imaginary part");
    return out;
}

DenseOperator reconstruct(const PauliVector& v) {
    const int n = v.n;
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range for Pauli transform");
    const long d = 1L << n;
    const long size = d * d;
    if (v.coeffs.size() != size)
        throw std::invalid_argument("Pauli coefficient count does not match qubit count");

    std::vector<cplx> a(size);
    for (long i = 0; i < size; ++i) a[i] = v.coeffs(i);

    for (int q = 0; q < n; ++q) {
        const long stride = 1L << (2 * (n - 1 - q));
        for (long base = 0; base < size; base += 4 * stride) {
            for (long off = 0; off < stride; ++off) {
                const long i00 = base + off;
                const long i01 = i00 + stride;
                const long i10 = i00 + 2 * stride;
                const long i11 = i00 + 3 * stride;
                const cplx v0 = a[i00], v1 = a[i01], v2 = a[i10], v3 = a[i11];
                a[i00] = (v0 + v3) * kInvSqrt2;
                a[i01] = (v1 - cplx(0, 1) * v2) * kInvSqrt2;
                a[i10] = (v1 + cplx(0, 1) * v2) * kInvSqrt2;
                a[i11] = (v0 - v3) * kInvSqrt2;
            }
        }
    }

    Mat m(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) {
            long idx = 0;
            for (int q = 0; q < n; ++q) {
                const int rq = static_cast<int>((r >> (n - 1 - q)) & 1);
                const int cq = static_cast<int>((c >> (n - 1 - q)) & 1);
                idx = (idx << 2) | (rq << 1) | cq;
            }
            m(r, c) = a[idx];
        }
    return DenseOperator::qubits(std::move(m), n);
}

std::uint32_t support_mask(long index, int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("qubit count out of range");
    if (index < 0 || index >= (1L << (2 * n))) throw std::invalid_argument("Pauli index out of range");
    std::uint32_t mask = 0;
    for (int q = n; q >= 1; --q) {
        if ((index & 3) != 0) mask |= 1u << (q - 1);
        index >>= 2;
    }
    return mask;
}

DenseOperator string_matrix(long index, int n) {
    if (n < 1 || n > 6) throw dimension_error("qubit count out of range for dense Pauli string");
    if (index < 0 || index >= (1L << (2 * n))) throw std::invalid_argument("Pauli index out of range");
    std::vector<int> digits(n);
    for (int q = n - 1; q >= 0; --q) {
        digits[q] = static_cast<int>(index & 3);
        index >>= 2;
    }
    DenseOperator out(sigma(digits[0]) * kInvSqrt2, {2});
    for (int q = 1; q < n; ++q)
        out = kron(out, DenseOperator(sigma(digits[q]) * kInvSqrt2, {2}));
    return out;
}

SubsetWeights weights(const PauliVector& v) {
    const int n = v.n;
    SubsetWeights out{n, Eigen::VectorXd::Zero(1L << n)};
    std::vector<double> inv_pow3(n + 1, 1.0);
    for (int k = 1; k <= n; ++k) inv_pow3[k] = inv_pow3[k - 1] / 3.0;
    for (long i = 0; i < v.coeffs.size(); ++i) {
        const std::uint32_t s = support_mask(i, n);
        out.w(s) += v.coeffs(i) * v.coeffs(i) * inv_pow3[popcount32(s)];
    }
    return out;
}

}  // namespace pauli

}  // namespace rpt
