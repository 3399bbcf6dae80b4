#pragma once

#include <utility>
#include <vector>

#include "core/dense.hpp"
#include "core/pauli.hpp"

namespace rpt {

enum class Boundary { open, periodic };

// Isotropic Heisenberg chain with a uniform longitudinal field:
// H = J sum_i (XX + YY + ZZ)_{i,i+1} + h sum_i Z_i.
struct ChainSpec {
    int n = 2;
    double J = 1.0;
    double h = 1.0;
    Boundary boundary = Boundary::open;
};

// Time scan of the subset-weight hierarchy under chain evolution.
struct ScrambleTrace {
    int n = 0;
    std::vector<double> times;
    std::vector<double> max_w;                    // max nonempty-subset weight
    std::vector<Eigen::VectorXd> level_weights;   // W_0..W_n per time
    double tau_prep = 0.0;                        // argmin time of max_w
    double min_max_w = 0.0;
    double haar_floor = 0.0;                      // 1/(2^n (2^n + 1))
};

namespace scramble {

StateVector basis_state(int n, std::uint64_t bits);
StateVector plus_state(int n);
StateVector ghz(int n);
StateVector bell_pairs(int n);  // n even; |Phi+> on (1,2), (3,4), ...

// Graph state: CZ edges applied to |+>^n; edges are 1-based vertex pairs.
StateVector graph_state(int n, const std::vector<std::pair<int, int>>& edges);

// Every marginal on k or fewer qubits equals the uniform mixed state.
bool is_k_uniform(const StateVector& psi, int k, double tol = 1e-9);

// Built-in catalog: (n, 1) -> GHZ_n; (5, 2) and (6, 2) -> ring graph
// states.  Each returned state is re-verified with is_k_uniform.
StateVector kuniform_candidate(int n, int k);

DenseOperator heisenberg(const ChainSpec& spec);

// For each grid time: evolve psi0, decompose, record max nonempty-subset
// weight and the per-level sums W_k.  refine improves the argmin by a
// golden-section search between the neighbouring grid points.
ScrambleTrace scan_scrambling(const ChainSpec& spec, const StateVector& psi0,
                              const std::vector<double>& t_grid, bool refine = false);

}  // namespace scramble

}  // namespace rpt
