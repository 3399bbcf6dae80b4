#include "core/dense.hpp"

#include <algorithm>
#include <numeric>

namespace rpt {

namespace {

std::vector<int> check_factor_dims(int dim, std::vector<int> fdims) {
    if (dim < 1) throw std::invalid_argument("operator dimension must be positive");
    if (dim > kMaxDim) throw dimension_error("dimension exceeds dense-storage cap");
    long long prod = 1;
    for (int d : fdims) {
        if (d < 1) throw std::invalid_argument("factor dimensions must be positive");
        prod *= d;
        if (prod > kMaxDim) throw dimension_error("factor dimensions exceed dense-storage cap");
    }
    if (prod != dim) throw std::invalid_argument("factor dimensions do not multiply to the matrix dimension");
    return fdims;
}

// Strides for mixed-radix factor indices; factor 1 is most significant.
std::vector<long> strides_of(const std::vector<int>& fdims) {
    std::vector<long> s(fdims.size(), 1);
    for (int i = static_cast<int>(fdims.size()) - 2; i >= 0; --i)
        s[i] = s[i + 1] * fdims[i + 1];
    return s;
}

}  // namespace

DenseOperator::DenseOperator(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("operator matrix must be square");
    fdims_ = check_factor_dims(static_cast<int>(m_.rows()), {static_cast<int>(m_.rows())});
}

DenseOperator::DenseOperator(Mat m, std::vector<int> factor_dims) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("operator matrix must be square");
    fdims_ = check_factor_dims(static_cast<int>(m_.rows()), std::move(factor_dims));
}

DenseOperator DenseOperator::identity(int dim) {
    if (dim < 1 || dim > kMaxDim) throw dimension_error("identity dimension out of range");
    return DenseOperator(Mat::Identity(dim, dim));
}

DenseOperator DenseOperator::qubits(Mat m, int n) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    if (m.rows() != (1L << n)) throw std::invalid_argument("matrix dimension does not match qubit count");
    return DenseOperator(std::move(m), std::vector<int>(n, 2));
}

DenseOperator DenseOperator::identity_qubits(int n) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    return DenseOperator(Mat::Identity(1L << n, 1L << n), std::vector<int>(n, 2));
}

int DenseOperator::qubit_count() const {
    for (int d : fdims_)
        if (d != 2) throw std::invalid_argument("operator is not a qubit register");
    return factors();
}

double DenseOperator::hermiticity_residue() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator DenseOperator::hermitized() const {
    return DenseOperator(0.5 * (m_ + m_.adjoint()), fdims_);
}

StateVector::StateVector(Vec amp, std::vector<int> factor_dims, bool renormalize, double tol)
    : a_(std::move(amp)) {
    fdims_ = check_factor_dims(static_cast<int>(a_.size()), std::move(factor_dims));
    const double nrm = a_.norm();
    if (renormalize) {
        if (nrm < 1e-12) throw validation_error("state vector has vanishing norm");
        a_ /= nrm;
    } else if (std::abs(nrm - 1.0) > tol) {
        throw validation_error("state vector is not normalized");
    }
}

StateVector StateVector::qubits(Vec amp, int n, bool renormalize) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    if (amp.size() != (1L << n)) throw std::invalid_argument("amplitude count does not match qubit count");
    return StateVector(std::move(amp), std::vector<int>(n, 2), renormalize);
}

int StateVector::qubit_count() const {
    for (int d : fdims_)
        if (d != 2) throw std::invalid_argument("state is not a qubit register");
    return factors();
}

DenseOperator projector(const StateVector& psi) {
    return DenseOperator(psi.amp() * psi.amp().adjoint(), psi.factor_dims());
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    const long long prod = static_cast<long long>(a.dim()) * b.dim();
    if (prod > kMaxDim) throw dimension_error("tensor product exceeds dense-storage cap");
    Mat m(prod, prod);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            m.block(static_cast<long>(i) * b.dim(), static_cast<long>(j) * b.dim(), b.dim(),
                    b.dim()) = a.mat()(i, j) * b.mat();
    std::vector<int> fd = a.factor_dims();
    fd.insert(fd.end(), b.factor_dims().begin(), b.factor_dims().end());
    return DenseOperator(std::move(m), std::move(fd));
}

StateVector kron(const StateVector& a, const StateVector& b) {
    const long long prod = static_cast<long long>(a.dim()) * b.dim();
    if (prod > kMaxDim) throw dimension_error("tensor product exceeds dense-storage cap");
    Vec v(prod);
    for (int i = 0; i < a.dim(); ++i)
        v.segment(static_cast<long>(i) * b.dim(), b.dim()) = a.amp()(i) * b.amp();
    std::vector<int> fd = a.factor_dims();
    fd.insert(fd.end(), b.factor_dims().begin(), b.factor_dims().end());
    return StateVector(std::move(v), std::move(fd));
}

DenseOperator partial_trace(const DenseOperator& a, std::vector<int> keep) {
    const int k = a.factors();
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("duplicate factor label in partial trace");
    for (int f : keep)
        if (f < 1 || f > k) throw std::invalid_argument("factor label out of range in partial trace");

    const auto& fd = a.factor_dims();
    const auto strides = strides_of(fd);
    std::vector<int> traced;
    for (int f = 1; f <= k; ++f)
        if (!std::binary_search(keep.begin(), keep.end(), f)) traced.push_back(f);

    // Flat offsets of every kept multi-index and every traced multi-index.
    auto offsets = [&](const std::vector<int>& labels) {
        std::vector<long> off{0};
        for (int f : labels) {
            std::vector<long> next;
            next.reserve(off.size() * fd[f - 1]);
            for (long base : off)
                for (int v = 0; v < fd[f - 1]; ++v) next.push_back(base + v * strides[f - 1]);
            off = std::move(next);
        }
        return off;
    };
    const auto kept_off = offsets(keep);
    const auto traced_off = offsets(traced);

    const long dk = static_cast<long>(kept_off.size());
    Mat out = Mat::Zero(dk, dk);
    for (long r = 0; r < dk; ++r)
        for (long c = 0; c < dk; ++c) {
            cplx s = 0;
            for (long t : traced_off) s += a.mat()(kept_off[r] + t, kept_off[c] + t);
            out(r, c) = s;
        }
    std::vector<int> fd_out;
    for (int f : keep) fd_out.push_back(fd[f - 1]);
    if (fd_out.empty()) fd_out.push_back(1);
    return DenseOperator(std::move(out), std::move(fd_out));
}

namespace {

// Flat-index permutation realizing a factor reorder.
std::vector<long> reorder_map(const std::vector<int>& fdims, const std::vector<int>& perm) {
    const int k = static_cast<int>(fdims.size());
    if (static_cast<int>(perm.size()) != k)
        throw std::invalid_argument("factor permutation has wrong length");
    std::vector<bool> seen(k, false);
    for (int p : perm) {
        if (p < 1 || p > k || seen[p - 1])
            throw std::invalid_argument("factor permutation is not a permutation");
        seen[p - 1] = true;
    }
    const auto old_strides = strides_of(fdims);
    std::vector<int> new_dims(k);
    for (int j = 0; j < k; ++j) new_dims[j] = fdims[perm[j] - 1];
    const auto new_strides = strides_of(new_dims);

    long dim = 1;
    for (int d : fdims) dim *= d;
    std::vector<long> map(dim);
    for (long idx = 0; idx < dim; ++idx) {
        long old_idx = 0;
        long rem = idx;
        for (int j = 0; j < k; ++j) {
            const long digit = rem / new_strides[j];
            rem %= new_strides[j];
            old_idx += digit * old_strides[perm[j] - 1];
        }
        map[idx] = old_idx;
    }
    return map;
}

}  // namespace

DenseOperator reorder_factors(const DenseOperator& a, const std::vector<int>& perm) {
    const auto map = reorder_map(a.factor_dims(), perm);
    const long d = a.dim();
    Mat out(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) out(r, c) = a.mat()(map[r], map[c]);
    std::vector<int> fd(perm.size());
    for (size_t j = 0; j < perm.size(); ++j) fd[j] = a.factor_dims()[perm[j] - 1];
    return DenseOperator(std::move(out), std::move(fd));
}

StateVector reorder_factors(const StateVector& a, const std::vector<int>& perm) {
    const auto map = reorder_map(a.factor_dims(), perm);
    Vec out(a.dim());
    for (long i = 0; i < a.dim(); ++i) out(i) = a.amp()(map[i]);
    std::vector<int> fd(perm.size());
    for (size_t j = 0; j < perm.size(); ++j) fd[j] = a.factor_dims()[perm[j] - 1];
    return StateVector(std::move(out), std::move(fd));
}

EigResult herm_eig(const DenseOperator& a, double tol) {
    if (a.hermiticity_residue() > tol)
        throw validation_error("matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (a.mat() + a.mat().adjoint()));
    if (solver.info() != Eigen::Success)
        throw numeric_error("Hermitian eigendecomposition failed to converge");
    return EigResult{solver.eigenvalues(), solver.eigenvectors()};
}

StateVector evolve(const DenseOperator& h, const StateVector& psi, double t) {
    return evolve(herm_eig(h), psi, t);
}

StateVector evolve(const EigResult& eig, const StateVector& psi, double t) {
    if (eig.vectors.rows() != psi.dim())
        throw std::invalid_argument("Hamiltonian and state dimensions differ");
    Vec coeff = eig.vectors.adjoint() * psi.amp();
    for (long i = 0; i < coeff.size(); ++i)
        coeff(i) *= std::exp(cplx(0.0, -eig.values(i) * t));
    // Unitary evolution must preserve the norm; 1e-9 headroom for roundoff.
    return StateVector(eig.vectors * coeff, psi.factor_dims(), false, 1e-9);
}

const Mat& sigma(int k) {
    static const Mat s[4] = {
        (Mat(2, 2) << 1, 0, 0, 1).finished(),
        (Mat(2, 2) << 0, 1, 1, 0).finished(),
        (Mat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
        (Mat(2, 2) << 1, 0, 0, -1).finished(),
    };
    if (k < 0 || k > 3) throw std::invalid_argument("Pauli index must be 0..3");
    return s[k];
}

}  // namespace rpt
