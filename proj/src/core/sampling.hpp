#pragma once

#include <vector>

#include "core/dense.hpp"
#include "core/rng.hpp"

namespace rpt {

// State-preparation strategies for the mixed-state ensembles.
//   haar_blocks: independent Haar states on n/ell blocks of ell qubits.
//   fixed_rotated: a fixed base state with independent Haar single-qubit
//     rotations applied to every qubit.
//   correlated_blocks: one Haar state on ell qubits, tensored n/ell times
//     (identical copies, so block errors are perfectly correlated).
enum class SamplerKind { haar_blocks, fixed_rotated, correlated_blocks };

struct SamplerSpec {
    SamplerKind kind = SamplerKind::haar_blocks;
    int n = 0;
    int ell = 1;
    StateVector base;  // fixed_rotated only

    static SamplerSpec haar(int n, int ell);
    static SamplerSpec rotated(StateVector base);
    static SamplerSpec correlated(int n, int ell);
    void validate() const;
};

namespace haar {

// Haar-random unit vector in C^dim.
StateVector haar_state(int dim, Rng& rng);

// Haar-random SU(2) element.
Mat random_su2(Rng& rng);

// Tensor product of n independent Haar single-qubit rotations.
DenseOperator random_local_rotations(int n, Rng& rng);

// E[prod_i |c_i|^{2 r_i}] over Haar states in C^d (complex components).
double moment_complex(int d, const std::vector<int>& r);

// E[prod_i x_i^{2 r_i}] over the real unit sphere S^{d-1}.
double moment_real(int d, const std::vector<int>& r);

}  // namespace haar

// One draw from the ensemble described by spec.
StateVector sample_state(const SamplerSpec& spec, Rng& rng);

// Monte-Carlo ensemble average of |psi><psi| over `samples` draws, using
// the per-shot stream tree rooted at `shots`.
DenseOperator ensemble_average(const SamplerSpec& spec, long samples, const RngStream& shots,
                               int threads = 1);

}  // namespace rpt
