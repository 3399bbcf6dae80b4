#pragma once

#include <cstdint>
#include <vector>

#include "core/dense.hpp"

namespace rpt {

// Leg order of a stored Choi matrix: all input legs first, then all output
// legs, one factor per qubit.  Two entry conventions are carried explicitly:
//   raw          satisfies  Tr(raw * (rho^T x O)) = Tr(O Phi(rho))
//   measurement  = partial transpose of raw on all input legs, satisfying
//                  Tr(meas * (rho x O)) = Tr(O Phi(rho))
// Keeping the tag on the object prevents silent transposes between the two.
enum class ChoiConvention { raw, measurement };

class ChoiMatrix {
  public:
    ChoiMatrix() = default;
    ChoiMatrix(int n, Mat m, ChoiConvention conv);

    int n() const { return n_; }
    ChoiConvention convention() const { return conv_; }
    const DenseOperator& op() const { return op_; }
    const Mat& mat() const { return op_.mat(); }

    // Convention conversion (input-leg partial transpose; an involution).
    ChoiMatrix to(ChoiConvention conv) const;

    // Integrity check for channel Chois: Hermitian within 1e-10, PSD of the
    // raw form within -1e-9, trace 2^n within 1e-8, trace-preserving
    // (partial trace over output legs = identity) within 1e-9.
    void validate() const;

  private:
    int n_ = 0;
    DenseOperator op_;
    ChoiConvention conv_ = ChoiConvention::raw;
};

// phi_ij parametrization of a doubly stochastic 1-qubit channel:
// measurement-convention Choi = 1/2 * id4 + sum_ij phi(i,j) sigma_i x sigma_j
// over i,j in {x,y,z} (plain, unnormalized Paulis).
struct PhiParams {
    Eigen::Matrix3d phi = Eigen::Matrix3d::Zero();
};

struct ProcessFidelity {
    double state_fidelity = 0.0;  // Uhlmann fidelity of the Choi states
    double avg_fidelity = 0.0;    // implied average channel fidelity
};

namespace choi {

ChoiMatrix from_unitary(const DenseOperator& u);
ChoiMatrix from_kraus(const std::vector<Mat>& kraus);

// Phi(rho) via contraction of the raw form over the input legs.
DenseOperator apply(const ChoiMatrix& c, const DenseOperator& rho);

// Tr(O Phi(rho)), evaluated as Tr(meas * (rho x O)).
double expectation(const ChoiMatrix& c, const DenseOperator& obs, const DenseOperator& rho);

// Reduced Choi on the qubit subset given as a bitmask (bit q-1 = qubit q):
// partial trace of the raw form over the complement's input and output legs,
// scaled by 1/2^{n-|s|} so that the result describes the channel seen on s
// when the complement starts uniformly mixed; trace comes out 2^{|s|}.
ChoiMatrix reduce(const ChoiMatrix& c, std::uint32_t s_mask);

// Choi of the tensor-product channel (raw convention result).
ChoiMatrix product_channel(const ChoiMatrix& a, const ChoiMatrix& b);

// Extraction / reconstruction of the 9-parameter form.  phi_params demands
// double stochasticity (both marginals = identity within 1e-8).
PhiParams phi_params(const ChoiMatrix& c);
ChoiMatrix phi_to_choi(const PhiParams& p);

ProcessFidelity process_fidelity(const ChoiMatrix& a, const ChoiMatrix& b);

}  // namespace choi

}  // namespace rpt
