#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/errors.hpp"

namespace rpt {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Square complex matrix tagged with a tensor-factor structure.  Factor 1 is
// the most significant index: for factor dims (d1, ..., dk) the flat index is
// i1*d2*...*dk + ... + ik.  All qubit-register code uses factor dims (2,...,2)
// with qubit 1 most significant.
class DenseOperator {
  public:
    DenseOperator() = default;
    explicit DenseOperator(Mat m);
    DenseOperator(Mat m, std::vector<int> factor_dims);

    static DenseOperator identity(int dim);
    static DenseOperator qubits(Mat m, int n);
    static DenseOperator identity_qubits(int n);

    int dim() const { return static_cast<int>(m_.rows()); }
    int factors() const { return static_cast<int>(fdims_.size()); }
    const std::vector<int>& factor_dims() const { return fdims_; }
    const Mat& mat() const { return m_; }
    Mat& mat() { return m_; }

    // Number of qubits; throws if any factor is not two-dimensional.
    int qubit_count() const;

    double hermiticity_residue() const;
    DenseOperator hermitized() const;

  private:
    Mat m_;
    std::vector<int> fdims_;
};

// State vector with the same factor convention as DenseOperator.
class StateVector {
  public:
    StateVector() = default;
    // Validates normalization within tol; renormalizes first when asked
    // (used for text-file loads where round-tripped amplitudes drift).
    StateVector(Vec amp, std::vector<int> factor_dims, bool renormalize = false,
                double tol = 1e-12);

    static StateVector qubits(Vec amp, int n, bool renormalize = false);

    int dim() const { return static_cast<int>(a_.size()); }
    int factors() const { return static_cast<int>(fdims_.size()); }
    const std::vector<int>& factor_dims() const { return fdims_; }
    const Vec& amp() const { return a_; }
    int qubit_count() const;

  private:
    Vec a_;
    std::vector<int> fdims_;
};

DenseOperator projector(const StateVector& psi);

// Tensor product; factor lists concatenate (a's factors become the most
// significant block).  Guarded by the dense-storage cap.
DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
StateVector kron(const StateVector& a, const StateVector& b);

// Trace out every factor not listed in `keep` (1-based labels, any order);
// kept factors stay in ascending label order.
DenseOperator partial_trace(const DenseOperator& a, std::vector<int> keep);

// Reorder tensor factors.  perm[j] is the 1-based old label that becomes
// new factor j+1.
DenseOperator reorder_factors(const DenseOperator& a, const std::vector<int>& perm);
StateVector reorder_factors(const StateVector& a, const std::vector<int>& perm);

struct EigResult {
    Eigen::VectorXd values;  // ascending
    Mat vectors;             // columns
};

// Eigendecomposition of a Hermitian operator.  Rejects inputs whose
// hermiticity residue exceeds tol, then solves on the symmetrized matrix.
EigResult herm_eig(const DenseOperator& a, double tol = 1e-10);

// exp(-i h t) |psi> through the eigendecomposition of h.
StateVector evolve(const DenseOperator& h, const StateVector& psi, double t);
StateVector evolve(const EigResult& eig, const StateVector& psi, double t);

// Pauli matrices; index 0..3 = identity, x, y, z.
const Mat& sigma(int k);

}  // namespace rpt
