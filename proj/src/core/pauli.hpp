#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/dense.hpp"

namespace rpt {

// Coefficients of a Hermitian qubit operator in the orthonormal Pauli basis
// sigma_mu / sqrt(2) per qubit.  Strings are indexed in base 4 with the
// digit for qubit 1 most significant; index 0 is the identity string.
struct PauliVector {
    int n = 0;
    Eigen::VectorXd coeffs;  // length 4^n
};

// Pauli-basis correlation matrix of the state-preparation error, in the
// same string indexing as PauliVector.  Row and column 0 are identically
// zero because the identity component of a normalized state is fixed.
// basis is the number of basis elements (4^n for qubit registers; d^2 for
// the analytic qudit form, where n is 0 unless d is a power of two).
struct ChiMatrix {
    int n = 0;
    long basis = 0;
    bool diagonal = false;
    Eigen::VectorXd diag;  // used when diagonal
    Eigen::MatrixXd full;  // used otherwise
};

// Per-subset weights w_s: the squared Pauli coefficients supported exactly
// on subset s, scaled by 3^-|s|.  Indexed by subset bitmask, where bit
// (q-1) stands for qubit q; w[0] is the identity weight 1/2^n.
struct SubsetWeights {
    int n = 0;
    Eigen::VectorXd w;  // length 2^n

    double max_nonempty() const;
    // W_k = sum over |s| = k of 3^k w_s, for k = 0..n.
    Eigen::VectorXd level_sums() const;
    // sum over all s of 3^|s| w_s; equals 1 for pure states.
    double weighted_total() const;
};

namespace pauli {

// O(n 4^n) forward transform.  Requires a Hermitian qubit operator; a
// residual imaginary part above 1e-8 in any coefficient is reported as a
// numeric error.
PauliVector decompose(const DenseOperator& op);

// Inverse transform back to the dense matrix.
DenseOperator reconstruct(const PauliVector& v);

// Bitmask of qubits on which string `index` acts nontrivially.
std::uint32_t support_mask(long index, int n);

// Dense matrix of one normalized Pauli string (digits base 4, qubit 1 most
// significant).  Intended for small n; O(4^n) memory.
DenseOperator string_matrix(long index, int n);

SubsetWeights weights(const PauliVector& v);

}  // namespace pauli

}  // namespace rpt
