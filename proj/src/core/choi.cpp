#include "core/choi.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "core/fidelity.hpp"
#include "core/util.hpp"

namespace rpt {

namespace {

int qubits_from_dim(long dim) {
    int n = 0;
    while ((1L << n) < dim) ++n;
    if ((1L << n) != dim) throw std::invalid_argument("dimension is not a power of two");
    return n;
}

// Partial transpose over the input-leg block index.
Mat input_leg_transpose(const Mat& m, long d) {
    Mat out(m.rows(), m.cols());
    const long blocks = m.rows() / d;
    for (long i = 0; i < blocks; ++i)
        for (long j = 0; j < blocks; ++j)
            out.block(i * d, j * d, d, d) = m.block(j * d, i * d, d, d);
    return out;
}

}  // namespace

ChoiMatrix::ChoiMatrix(int n, Mat m, ChoiConvention conv) : n_(n), conv_(conv) {
    if (n < 1 || n > 6) throw dimension_error("Choi qubit count out of range");
    if (m.rows() != (1L << (2 * n)))
        throw std::invalid_argument("Choi matrix dimension does not match qubit count");
    op_ = DenseOperator(std::move(m), std::vector<int>(2 * n, 2));
}

ChoiMatrix ChoiMatrix::to(ChoiConvention conv) const {
    if (conv == conv_) return *this;
    return ChoiMatrix(n_, input_leg_transpose(mat(), 1L << n_), conv);
}

void ChoiMatrix::validate() const {
    const ChoiMatrix raw = to(ChoiConvention::raw);
    if (raw.op().hermiticity_residue() > 1e-10)
        throw validation_error("Choi matrix is not Hermitian within tolerance");
    const double d = static_cast<double>(1L << n_);
    if (std::abs(raw.mat().trace().real() - d) > 1e-8)
        throw validation_error("Choi matrix trace differs from the register dimension");
    const EigResult e = herm_eig(raw.op());
    if (e.values.minCoeff() < -1e-9)
        throw validation_error("Choi matrix is not positive semidefinite");
    // Trace preservation: tracing out the output legs must leave the identity.
    std::vector<int> in_legs(n_);
    for (int q = 0; q < n_; ++q) in_legs[q] = q + 1;
    const DenseOperator marg = partial_trace(raw.op(), in_legs);
    if ((marg.mat() - Mat::Identity(1L << n_, 1L << n_)).cwiseAbs().maxCoeff() > 1e-9)
        throw validation_error("Choi matrix is not trace-preserving");
}

namespace choi {

ChoiMatrix from_unitary(const DenseOperator& u) {
    const long d = u.dim();
    const int n = qubits_from_dim(d);
    if ((u.mat().adjoint() * u.mat() - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("matrix is not unitary within tolerance");
    Vec v(d * d);
    for (long i = 0; i < d; ++i)
        for (long k = 0; k < d; ++k) v(i * d + k) = u.mat()(k, i);
    return ChoiMatrix(n, v * v.adjoint(), ChoiConvention::raw);
}

ChoiMatrix from_kraus(const std::vector<Mat>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("empty Kraus list");
    const long d = kraus.front().rows();
    const int n = qubits_from_dim(d);
    Mat comp = Mat::Zero(d, d);
    for (const Mat& a : kraus) {
        if (a.rows() != d || a.cols() != d)
            throw std::invalid_argument("Kraus operators have inconsistent dimensions");
        comp += a.adjoint() * a;
    }
    if ((comp - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
        throw validation_error("Kraus operators do not satisfy the completeness relation");
    Mat m = Mat::Zero(d * d, d * d);
    for (const Mat& a : kraus) {
        Vec v(d * d);
        for (long i = 0; i < d; ++i)
            for (long k = 0; k < d; ++k) v(i * d + k) = a(k, i);
        m += v * v.adjoint();
    }
    ChoiMatrix c(n, std::move(m), ChoiConvention::raw);
    c.validate();
    return c;
}

DenseOperator apply(const ChoiMatrix& c, const DenseOperator& rho) {
    const long d = 1L << c.n();
    if (rho.dim() != d) throw std::invalid_argument("state dimension does not match the channel");
    const ChoiMatrix raw = c.to(ChoiConvention::raw);
    Mat out = Mat::Zero(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            const cplx w = rho.mat()(i, j);
            if (w != cplx(0, 0)) out += w * raw.mat().block(i * d, j * d, d, d);
        }
    return DenseOperator::qubits(std::move(out), c.n());
}

double expectation(const ChoiMatrix& c, const DenseOperator& obs, const DenseOperator& rho) {
    const long d = 1L << c.n();
    if (rho.dim() != d || obs.dim() != d)
        throw std::invalid_argument("operator dimensions do not match the channel");
    if (obs.hermiticity_residue() > 1e-8)
        throw std::invalid_argument("observable is not Hermitian");
    const ChoiMatrix meas = c.to(ChoiConvention::measurement);
    const DenseOperator arg = kron(rho, obs);
    // Tr(A B) without forming the product.
    const cplx tr = (meas.mat().transpose().cwiseProduct(arg.mat())).sum();
    return tr.real();
}

ChoiMatrix reduce(const ChoiMatrix& c, std::uint32_t s_mask) {
    const int n = c.n();
    if (s_mask == 0) throw std::invalid_argument("reduction subset must be nonempty");
    if (s_mask >> n) throw std::invalid_argument("reduction subset mentions qubits outside the register");
    std::vector<int> keep;
    for (int q = 1; q <= n; ++q)
        if (s_mask & (1u << (q - 1))) keep.push_back(q);
    const int m = static_cast<int>(keep.size());
    std::vector<int> legs;
    for (int q : keep) legs.push_back(q);
    for (int q : keep) legs.push_back(n + q);
    const ChoiMatrix raw = c.to(ChoiConvention::raw);
    DenseOperator t = partial_trace(raw.op(), legs);
    const double scale = 1.0 / static_cast<double>(1L << (n - m));
    ChoiMatrix out(m, scale * t.mat(), ChoiConvention::raw);
    return out.to(c.convention());
}

ChoiMatrix product_channel(const ChoiMatrix& a, const ChoiMatrix& b) {
    const int na = a.n(), nb = b.n();
    if (na + nb > 6) throw dimension_error("product channel exceeds the dense-storage cap");
    const DenseOperator k =
        kron(a.to(ChoiConvention::raw).op(), b.to(ChoiConvention::raw).op());
    // kron leg order: [inA, outA, inB, outB] -> [inA, inB, outA, outB].
    std::vector<int> perm;
    for (int q = 1; q <= na; ++q) perm.push_back(q);
    for (int q = 1; q <= nb; ++q) perm.push_back(2 * na + q);
    for (int q = 1; q <= na; ++q) perm.push_back(na + q);
    for (int q = 1; q <= nb; ++q) perm.push_back(2 * na + nb + q);
    return ChoiMatrix(na + nb, reorder_factors(k, perm).mat(), ChoiConvention::raw);
}

PhiParams phi_params(const ChoiMatrix& c) {
    if (c.n() != 1) throw std::invalid_argument("phi parametrization requires a 1-qubit Choi");
    const ChoiMatrix mc = c.to(ChoiConvention::measurement);
    const Mat& m = mc.mat();
    const Mat id = Mat::Identity(2, 2);
    // Double stochasticity: both marginals of the reduced process are 1.
    const DenseOperator in_marg = partial_trace(mc.op(), {1});
    const DenseOperator out_marg = partial_trace(mc.op(), {2});
    if ((in_marg.mat() - id).cwiseAbs().maxCoeff() > 1e-8 ||
        (out_marg.mat() - id).cwiseAbs().maxCoeff() > 1e-8)
        throw validation_error("reduced process is not doubly stochastic within tolerance");
    PhiParams p;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const Mat basis = Eigen::kroneckerProduct(sigma(i), sigma(j));
            p.phi(i - 1, j - 1) = 0.25 * (m.transpose().cwiseProduct(basis)).sum().real();
        }
    return p;
}

ChoiMatrix phi_to_choi(const PhiParams& p) {
    Mat m = 0.5 * Mat::Identity(4, 4);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            m += p.phi(i - 1, j - 1) * Eigen::kroneckerProduct(sigma(i), sigma(j)).eval();
    return ChoiMatrix(1, std::move(m), ChoiConvention::measurement);
}

ProcessFidelity process_fidelity(const ChoiMatrix& a, const ChoiMatrix& b) {
    if (a.n() != b.n()) throw std::invalid_argument("channels act on different register sizes");
    const double d = static_cast<double>(1L << a.n());
    const DenseOperator sa(a.to(ChoiConvention::raw).mat() / d, a.op().factor_dims());
    const DenseOperator sb(b.to(ChoiConvention::raw).mat() / d, b.op().factor_dims());
    ProcessFidelity out;
    out.state_fidelity = fid::uhlmann(sa, sb);
    out.avg_fidelity = (d * out.state_fidelity + 1.0) / (d + 1.0);
    return out;
}

}  // namespace choi

}  // namespace rpt
