#pragma once

#include <optional>
#include <string>

#include "core/pauli.hpp"
#include "core/sampling.hpp"

namespace rpt {

// Monte-Carlo chi with per-entry statistics.  chi is the single-shot
// covariance; divide by the shot count for the nu-shot ensemble.
struct ChiEstimate {
    ChiMatrix chi;
    Eigen::VectorXd diag_se;   // standard error of each diagonal entry
    double sigma_max = 0.0;
    double sigma_max_se = 0.0; // from re-streamed top-eigendirection projections
    long samples = 0;
};

struct RateReport {
    std::string strategy;
    int n = 0;
    int ell = 0;
    long nu = 1;
    double sigma_max = 0.0;
    std::optional<double> analytic_rate;
    std::optional<double> bound;
    double stderr_sigma = 0.0;
};

namespace conv {

// Sample second moments <v_i v_j> (i, j != 0) of the Pauli coefficients of
// one-shot states drawn from spec; row/column 0 are zero by construction.
// diag_only is only meaningful for samplers whose twirl symmetry kills the
// off-diagonal moments (independent blocks or single-qubit twirls); the
// correlated sampler rejects it.  Full form is capped at n <= 4.
ChiEstimate chi_monte_carlo(const SamplerSpec& spec, long samples, const RngStream& rng,
                            bool diag_only, int threads = 1);

// Divide all entries by nu (i.i.d. shot averaging).
ChiMatrix scale_shots(const ChiMatrix& chi, long nu);

double sigma_max(const ChiMatrix& chi);

// Convergence rate of independent ell-qudit blocks: 1/(nu d^n (d^ell + 1)).
double thm1_rate(int n, int ell, long nu, int d = 2);

// Rate for a fixed state under independent single-qubit twirls:
// max nonempty-subset weight / nu.  A state on ell < n qubits is read as
// tensored across n/ell identical blocks (weights multiply across blocks).
double thm3_rate(const StateVector& state, long nu, int n);

// Worst-case rate bound for a k0-uniform start:
// (2^{k0+1} - 1)/(nu 2^n 3^{k0+1}).
double thm4_bound(int n, int k0, long nu);

// Exact chi of nu-shot Haar sampling in dimension d (full form):
// zero in the identity sector, 1/(nu d (d+1)) on every other diagonal.
ChiMatrix haar_chi_analytic(int d, long nu);

// Cauchy-Schwarz observable-error bound sqrt(sigma_max) * p_norm.
double error_bound(double p_norm, const ChiMatrix& chi);

}  // namespace conv

}  // namespace rpt
