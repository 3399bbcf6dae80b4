#include "core/scramble.hpp"

#include <algorithm>
#include <cmath>

#include "core/util.hpp"

namespace rpt {
namespace scramble {

StateVector basis_state(int n, std::uint64_t bits) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    if (bits >> n) throw std::invalid_argument("basis label mentions qubits outside the register");
    Vec v = Vec::Zero(1L << n);
    // Qubit 1 is the most significant bit of the flat index.
    v(static_cast<long>(bits)) = 1.0;
    return StateVector::qubits(std::move(v), n);
}

StateVector plus_state(int n) {
    if (n < 1 || n > 12) throw dimension_error("qubit count out of range");
    const long d = 1L << n;
    return StateVector::qubits(Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))), n);
}

StateVector ghz(int n) {
    if (n < 2 || n > 12) throw std::invalid_argument("GHZ needs at least two qubits");
    const long d = 1L << n;
    Vec v = Vec::Zero(d);
    v(0) = v(d - 1) = 1.0 / std::sqrt(2.0);
    return StateVector::qubits(std::move(v), n);
}

StateVector bell_pairs(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("Bell-pair register needs an even qubit count");
    StateVector psi = ghz(2);
    for (int p = 1; p < n / 2; ++p) psi = kron(psi, ghz(2));
    return psi;
}

StateVector graph_state(int n, const std::vector<std::pair<int, int>>& edges) {
    StateVector psi = plus_state(n);
    Vec v = psi.amp();
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > n || b < 1 || b > n || a == b)
            throw std::invalid_argument("graph edge out of range");
        const long ma = 1L << (n - a);
        const long mb = 1L << (n - b);
        for (long i = 0; i < v.size(); ++i)
            if ((i & ma) && (i & mb)) v(i) = -v(i);
    }
    return StateVector::qubits(std::move(v), n);
}

bool is_k_uniform(const StateVector& psi, int k, double tol) {
    const int n = psi.qubit_count();
    if (k < 1 || k > n) throw std::invalid_argument("uniformity level out of range");
    const DenseOperator rho = projector(psi);
    // Checking |s| = k suffices for smaller subsets only when k-marginals
    // are exactly uniform; check every size up to k to honor the contract.
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int sz = popcount32(mask);
        if (sz > k) continue;
        std::vector<int> keep;
        for (int q = 1; q <= n; ++q)
            if (mask & (1u << (q - 1))) keep.push_back(q);
        const DenseOperator marg = partial_trace(rho, keep);
        const long d = marg.dim();
        if ((marg.mat() - Mat::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() >
            tol)
            return false;
    }
    return true;
}

StateVector kuniform_candidate(int n, int k) {
    StateVector psi;
    if (k == 1 && n >= 2 && n <= 12) {
        psi = ghz(n);
    } else if (k == 2 && (n == 5 || n == 6)) {
        std::vector<std::pair<int, int>> ring;
        for (int q = 1; q <= n; ++q) ring.emplace_back(q, q % n + 1);
        psi = graph_state(n, ring);
    } else {
        throw std::invalid_argument("no cataloged construction for this uniformity level");
    }
    if (!is_k_uniform(psi, k))
        throw numeric_error("cataloged state failed its uniformity verification");
    return psi;
}

DenseOperator heisenberg(const ChainSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("chain needs at least two sites");
    if (spec.n > 12) throw dimension_error("chain length exceeds the dense-storage cap");
    const int n = spec.n;
    const long d = 1L << n;
    Mat h = Mat::Zero(d, d);

    auto embed_two = [&](int qa, int qb, int pa, int pb, double coeff) {
        // Accumulate coeff * sigma_pa(qa) sigma_pb(qb) over the register.
        const Mat& sa = sigma(pa);
        const Mat& sb = sigma(pb);
        const long ma = 1L << (n - qa);
        const long mb = 1L << (n - qb);
        for (long col = 0; col < d; ++col) {
            const int ca = (col & ma) ? 1 : 0;
            const int cb = (col & mb) ? 1 : 0;
            for (int ra = 0; ra < 2; ++ra)
                for (int rb = 0; rb < 2; ++rb) {
                    const cplx amp = sa(ra, ca) * sb(rb, cb);
                    if (amp == cplx(0, 0)) continue;
                    long row = col;
                    row = (row & ~ma) | (ra ? ma : 0);
                    row = (row & ~mb) | (rb ? mb : 0);
                    h(row, col) += coeff * amp;
                }
        }
    };

    const int bonds = (spec.boundary == Boundary::periodic && n > 2) ? n : n - 1;
    for (int b = 0; b < bonds; ++b) {
        const int qa = b + 1;
        const int qb = (b + 1) % n + 1;
        for (int p = 1; p <= 3; ++p) embed_two(qa, qb, p, p, spec.J);
    }
    for (int q = 1; q <= n; ++q) {
        const long mq = 1L << (n - q);
        for (long i = 0; i < d; ++i) h(i, i) += (i & mq) ? -spec.h : spec.h;
    }
    return DenseOperator::qubits(std::move(h), n);
}

namespace {

double max_weight_at(const EigResult& eig, const StateVector& psi0, double t,
                     Eigen::VectorXd* levels) {
    const StateVector psi = evolve(eig, psi0, t);
    const SubsetWeights w = pauli::weights(pauli::decompose(projector(psi)));
    if (levels) *levels = w.level_sums();
    return w.max_nonempty();
}

}  // namespace

ScrambleTrace scan_scrambling(const ChainSpec& spec, const StateVector& psi0,
                              const std::vector<double>& t_grid, bool refine) {
    if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
    const int n = psi0.qubit_count();
    if (n != spec.n) throw std::invalid_argument("state and chain sizes differ");
    const EigResult eig = herm_eig(heisenberg(spec), 1e-12);

    ScrambleTrace tr;
    tr.n = n;
    const double dn = static_cast<double>(1L << n);
    tr.haar_floor = 1.0 / (dn * (dn + 1.0));
    tr.times = t_grid;
    tr.max_w.resize(t_grid.size());
    tr.level_weights.resize(t_grid.size());
    size_t best = 0;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        tr.max_w[i] = max_weight_at(eig, psi0, t_grid[i], &tr.level_weights[i]);
        if (tr.max_w[i] < tr.max_w[best]) best = i;
    }
    tr.tau_prep = t_grid[best];
    tr.min_max_w = tr.max_w[best];

    if (refine && t_grid.size() >= 2) {
        const double lo = t_grid[best > 0 ? best - 1 : best];
        const double hi = t_grid[best + 1 < t_grid.size() ? best + 1 : best];
        if (hi > lo) {
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            double a = lo, b = hi;
            double c = b - gr * (b - a);
            double d = a + gr * (b - a);
            double fc = max_weight_at(eig, psi0, c, nullptr);
            double fd = max_weight_at(eig, psi0, d, nullptr);
            const double tol = 1e-3 * (hi - lo);
            while (b - a > tol) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - gr * (b - a);
                    fc = max_weight_at(eig, psi0, c, nullptr);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + gr * (b - a);
                    fd = max_weight_at(eig, psi0, d, nullptr);
                }
            }
            const double tm = 0.5 * (a + b);
            const double fm = max_weight_at(eig, psi0, tm, nullptr);
            if (fm < tr.min_max_w) {
                tr.tau_prep = tm;
                tr.min_max_w = fm;
            }
        }
    }
    return tr;
}

}  // namespace scramble
}  // namespace rpt
