#pragma once

#include <functional>
#include <vector>

#include "core/choi.hpp"
#include "core/pauli.hpp"

namespace rpt {

struct SldOperator {
    DenseOperator op;
    int kernel_dim = 0;  // number of (m, n) eigenpairs zeroed by the cutoff
};

namespace metro {

// Symmetric logarithmic derivative: solves {L, rho}/2 = drho in rho's
// eigenbasis, zeroing blocks where the eigenvalue sum is below 1e-10.
// drho must be Hermitian and traceless.
SldOperator sld(const DenseOperator& rho, const DenseOperator& drho);

// Dual of one normalized Pauli string: {L, rho}/2 = sigma_index / sqrt(2^n).
// No tracelessness requirement (the identity string has a trace).
SldOperator dual(const DenseOperator& rho, long pauli_index);

// Fisher matrix F_ab = Re Tr(L_a L_b rho) from the SLDs of each derivative.
Eigen::MatrixXd fisher(const DenseOperator& rho, const std::vector<DenseOperator>& drhos);

// Same quantity assembled from Pauli-dual operators: each derivative is
// decomposed as sum_i dv_i sigma_i/sqrt(2^n) and L_a = sum_i dv_i dual_i.
// Capped at two qubits (4^n duals are materialized).
Eigen::MatrixXd fisher_via_duals(const DenseOperator& rho,
                                 const std::vector<DenseOperator>& drhos);

// |d/dphi v|^2 of a parametrized coefficient vector by central difference,
// cross-checked at half step (Richardson guard).
double sensitivity_proxy(const std::function<Eigen::VectorXcd(double)>& curve, double phi,
                         double step = 1e-4);

// Analytic variant: squared norm of a supplied derivative vector.
double sensitivity_proxy(const Eigen::VectorXcd& dcurve);

// Choi of the phase rotation exp(-i phi sigma_z / 2) (raw convention).
ChoiMatrix phase_channel_choi(double phi);

// Pauli coefficients of the GHZ projector: 1/sqrt(2^nu) on {id,z}-strings
// with an even number of z factors, (-1)^{k_y/2}/sqrt(2^nu) on {x,y}-strings
// with an even number of y factors, zero elsewhere.
PauliVector ghz_pauli(int nu);

// Closed-form Pauli vector of (Phi_1)^{x nu} applied to the GHZ projector,
// where Phi_1 is the doubly stochastic 1-qubit channel with parameters phi.
// Depends only on phi_zz and the 2x2 xy-block of phi.
PauliVector ghz_protocol_final_state(const PhiParams& phi, int nu);

// Phase-carrying half of the {x,y}-string tail of the protocol state: the
// complex amplitudes (over the 2^nu strings) whose conjugate pair makes up
// the real tail.  Squared norm 1/4 for phase channels; its derivative's
// squared norm is the nu^2/4 sensitivity proxy.
Eigen::VectorXcd ghz_phase_component(const PhiParams& phi, int nu);

// Protocol curves for the proxy: theta-parametrized coefficient vectors
// under the phase channel.
std::function<Eigen::VectorXcd(double)> ghz_proxy_curve(int nu);
std::function<Eigen::VectorXcd(double)> separable_proxy_curve(int nu);

// Analytic derivatives of the two curves.
Eigen::VectorXcd ghz_proxy_derivative(int nu, double theta);
Eigen::VectorXcd separable_proxy_derivative(int nu, double theta);

}  // namespace metro

}  // namespace rpt
