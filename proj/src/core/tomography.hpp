#pragma once

#include <vector>

#include "core/choi.hpp"
#include "core/rng.hpp"
#include "core/sampling.hpp"

namespace rpt {

// One tomography setting: per-qubit choices from the probe set
// {|0><0|, |1><1|, |+><+|, |+i><+i|} (indices 0..3) for the prepared
// input tau1 and the measured projector tau2 on the subset s.
struct TomoSetting {
    std::vector<int> tau1;
    std::vector<int> tau2;
};

enum class TomoMode {
    full,        // sampled preparation and Bernoulli readout
    exact_prep,  // complement fixed at the uniform mixture, Bernoulli readout
    exact_meas   // sampled preparation, exact probabilities (no shot noise)
};

struct TomoResult {
    std::vector<double> estimates;  // per setting, full mode, trial-averaged
    ChoiMatrix reduced_choi_est;    // linear inversion of estimates; not validated
    double delta_prep_sq = 0.0;
    double delta_meas_sq = 0.0;
    double delta_total_sq = 0.0;
    double delta_prep_se = 0.0;
    double delta_meas_se = 0.0;
    double delta_total_se = 0.0;
    double additivity_gap = 0.0;  // total - prep - meas
    double additivity_se = 0.0;
    long nu = 0;
    int trials = 0;
};

namespace tomo {

// Rank-1 probe projector for one choice index (2x2).
DenseOperator tau_projector(int choice);

// All 16^m settings in lexicographic order, tau1-major; within each tau the
// first qubit of s varies slowest.  m is capped at 2.
std::vector<TomoSetting> tomo_basis(int m);

// Operator P on the complement's input space with p = <psi|P|psi> giving the
// probability of outcome tau2 when the subset is prepared in tau1 and the
// complement in |psi>.  Tr(P)/2^{N-m} is the uniform-mixture probability.
DenseOperator setting_probe(const ChoiMatrix& phi, const std::vector<int>& s,
                            const TomoSetting& setting);

// Shot-level estimate of the reduced Choi entry for one setting.
double simulate_setting(const ChoiMatrix& phi, const std::vector<int>& s,
                        const TomoSetting& setting, const SamplerSpec& prep, long nu,
                        const RngStream& rng, TomoMode mode);

// Ground-truth entry from an already reduced Choi matrix.
double exact_setting(const ChoiMatrix& reduced, const TomoSetting& setting);

// Linear inversion of a complete estimate map (tau1-major order) into a
// measurement-convention Choi matrix.  No positivity projection.
ChoiMatrix reconstruct(const std::vector<double>& estimates, int m);

// Optional post-processing: nearest PSD matrix by eigenvalue clipping,
// rescaled to the trace of the input.
ChoiMatrix nearest_psd(const ChoiMatrix& c);

// Sampling-error decomposition over independent trials: squared deviation
// from the exact entries, split into preparation and measurement parts by
// the exact_* modes, with the full mode giving the total.
TomoResult error_decompose(const ChoiMatrix& phi, const std::vector<int>& s,
                           const SamplerSpec& prep, long nu, int trials,
                           const RngStream& rng, int threads = 1);

// (1 - sum_i p_i^2)/nu, the mean squared multinomial sampling error.
double classical_sampling_error(const Eigen::VectorXd& p, long nu);

}  // namespace tomo

}  // namespace rpt
