#include "core/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include <unsupported/Eigen/KroneckerProduct>

#include "core/errors.hpp"
#include "core/pauli.hpp"

namespace rpt {
namespace tomo {

namespace {

constexpr double kProbSlack = 1e-9;

void check_subset(const std::vector<int>& s, int n) {
    if (s.empty()) throw std::invalid_argument("empty tomography subset");
    for (size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 1 || s[j] > n) throw std::invalid_argument("subset qubit label out of range");
        if (j > 0 && s[j] <= s[j - 1])
            throw std::invalid_argument("subset labels must be strictly increasing");
    }
}

std::uint32_t subset_mask(const std::vector<int>& s) {
    std::uint32_t m = 0;
    for (int q : s) m |= 1u << (q - 1);
    return m;
}

void check_setting(const TomoSetting& setting, size_t m) {
    if (setting.tau1.size() != m || setting.tau2.size() != m)
        throw std::invalid_argument("setting arity does not match the subset size");
    for (int c : setting.tau1)
        if (c < 0 || c > 3) throw std::invalid_argument("probe index out of range");
    for (int c : setting.tau2)
        if (c < 0 || c > 3) throw std::invalid_argument("probe index out of range");
}

double checked_probability(double p) {
    if (p < -kProbSlack || p > 1.0 + kProbSlack)
        throw numeric_error("setting probability left the unit interval");
    return std::clamp(p, 0.0, 1.0);
}

// Product of probe projectors over the subset, first qubit most significant.
DenseOperator probe_product(const std::vector<int>& choices) {
    Mat m = Mat::Ones(1, 1);
    for (int c : choices) m = Eigen::kroneckerProduct(m, tau_projector(c).mat()).eval();
    return DenseOperator::qubits(m, static_cast<int>(choices.size()));
}

struct TrialOutcome {
    std::vector<double> full;  // per-setting estimates
    double total_sq = 0.0;     // mean squared deviation over settings, per mode
    double prep_sq = 0.0;
    double meas_sq = 0.0;
};

}  // namespace

DenseOperator tau_projector(int choice) {
    Mat m(2, 2);
    switch (choice) {
        case 0: m << 1, 0, 0, 0; break;
        case 1: m << 0, 0, 0, 1; break;
        case 2: m << cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0); break;
        case 3: m << cplx(0.5, 0), cplx(0, -0.5), cplx(0, 0.5), cplx(0.5, 0); break;
        default: throw std::invalid_argument("probe index out of range");
    }
    return DenseOperator::qubits(m, 1);
}

std::vector<TomoSetting> tomo_basis(int m) {
    if (m < 1 || m > 2) throw dimension_error("tomography subset size is capped at two qubits");
    const long per = 1L << (2 * m);  // 4^m
    std::vector<TomoSetting> out;
    out.reserve(per * per);
    for (long t1 = 0; t1 < per; ++t1) {
        for (long t2 = 0; t2 < per; ++t2) {
            TomoSetting st;
            st.tau1.resize(m);
            st.tau2.resize(m);
            for (int q = 0; q < m; ++q) {
                st.tau1[q] = static_cast<int>((t1 >> (2 * (m - 1 - q))) & 3);
                st.tau2[q] = static_cast<int>((t2 >> (2 * (m - 1 - q))) & 3);
            }
            out.push_back(std::move(st));
        }
    }
    return out;
}

DenseOperator setting_probe(const ChoiMatrix& phi, const std::vector<int>& s,
                            const TomoSetting& setting) {
    const int n = phi.n();
    check_subset(s, n);
    const size_t m = s.size();
    check_setting(setting, m);

    const ChoiMatrix raw = phi.to(ChoiConvention::raw);
    // Probe operator over all 2n legs: tau1^T on subset inputs, tau2 on
    // subset outputs, identity elsewhere.
    Mat probe = Mat::Ones(1, 1);
    for (int pass = 0; pass < 2; ++pass) {
        for (int q = 1; q <= n; ++q) {
            const auto it = std::find(s.begin(), s.end(), q);
            Mat leg = Mat::Identity(2, 2);
            if (it != s.end()) {
                const int j = static_cast<int>(it - s.begin());
                leg = pass == 0 ? Mat(tau_projector(setting.tau1[j]).mat().transpose())
                                : tau_projector(setting.tau2[j]).mat();
            }
            probe = Eigen::kroneckerProduct(probe, leg).eval();
        }
    }

    const DenseOperator contracted(Mat(raw.mat() * probe), raw.op().factor_dims());
    std::vector<int> keep;
    for (int q = 1; q <= n; ++q)
        if (std::find(s.begin(), s.end(), q) == s.end()) keep.push_back(q);
    const DenseOperator q = partial_trace(contracted, keep);
    const DenseOperator p(Mat(q.mat().transpose()), q.factor_dims());
    if (p.hermiticity_residue() > 1e-8)
        throw numeric_error("setting probe operator is not Hermitian");
    return p.hermitized();
}

double simulate_setting(const ChoiMatrix& phi, const std::vector<int>& s,
                        const TomoSetting& setting, const SamplerSpec& prep, long nu,
                        const RngStream& rng, TomoMode mode) {
    const int n = phi.n();
    check_subset(s, n);
    const int m = static_cast<int>(s.size());
    if (m >= n) throw std::invalid_argument("subset must leave at least one complement qubit");
    prep.validate();
    if (prep.n != n - m)
        throw std::invalid_argument("preparation strategy does not cover the complement");
    if (nu < 1) throw std::invalid_argument("shot count must be positive");

    const DenseOperator probe = setting_probe(phi, s, setting);
    Rng r(rng);
    double acc = 0.0;
    if (mode == TomoMode::exact_prep) {
        const double p0 =
            checked_probability(probe.mat().trace().real() / static_cast<double>(probe.dim()));
        for (long k = 0; k < nu; ++k) acc += r.bernoulli(p0) ? 1.0 : 0.0;
        return acc / static_cast<double>(nu);
    }
    for (long k = 0; k < nu; ++k) {
        const StateVector psi = sample_state(prep, r);
        const double p =
            checked_probability((psi.amp().adjoint() * probe.mat() * psi.amp())(0).real());
        if (mode == TomoMode::full)
            acc += r.bernoulli(p) ? 1.0 : 0.0;
        else
            acc += p;
    }
    return acc / static_cast<double>(nu);
}

double exact_setting(const ChoiMatrix& reduced, const TomoSetting& setting) {
    const size_t m = static_cast<size_t>(reduced.n());
    check_setting(setting, m);
    return choi::expectation(reduced, probe_product(setting.tau2), probe_product(setting.tau1));
}

ChoiMatrix reconstruct(const std::vector<double>& estimates, int m) {
    if (m < 1 || m > 2) throw dimension_error("tomography subset size is capped at two qubits");
    const long per = 1L << (2 * m);
    if (static_cast<long>(estimates.size()) != per * per)
        throw std::invalid_argument("estimate map does not cover every setting");

    // Single-qubit transfer matrix: row t holds the normalized-Pauli
    // coefficients of probe t, so probe = sum_a T(t, a) sigma_a.
    Eigen::Matrix4d t1;
    for (int t = 0; t < 4; ++t)
        t1.row(t) = pauli::decompose(tau_projector(t)).coeffs.transpose();
    Eigen::MatrixXd tm = t1;
    if (m == 2) tm = Eigen::kroneckerProduct(t1, t1).eval();

    Eigen::MatrixXd e(per, per);
    for (long a = 0; a < per; ++a)
        for (long b = 0; b < per; ++b) e(a, b) = estimates[a * per + b];

    const auto lu = tm.partialPivLu();
    const Eigen::MatrixXd g = lu.solve(Eigen::MatrixXd(lu.solve(e).transpose())).transpose();

    PauliVector v;
    v.n = 2 * m;
    v.coeffs = Eigen::VectorXd::Zero(per * per);
    for (long a = 0; a < per; ++a)
        for (long b = 0; b < per; ++b) v.coeffs(a * per + b) = g(a, b);
    return ChoiMatrix(m, pauli::reconstruct(v).mat(), ChoiConvention::measurement);
}

ChoiMatrix nearest_psd(const ChoiMatrix& c) {
    const ChoiMatrix raw = c.to(ChoiConvention::raw);
    const EigResult eig = herm_eig(raw.op(), 1e-6);
    const double tr = raw.mat().trace().real();
    Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
    const double mass = clipped.sum();
    if (mass <= 0.0) throw numeric_error("positive part of the estimate vanishes");
    clipped *= tr / mass;
    const Mat fixed = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
    return ChoiMatrix(raw.n(), fixed, ChoiConvention::raw).to(c.convention());
}

TomoResult error_decompose(const ChoiMatrix& phi, const std::vector<int>& s,
                           const SamplerSpec& prep, long nu, int trials,
                           const RngStream& rng, int threads) {
    if (trials < 30) throw std::invalid_argument("error decomposition needs at least 30 trials");
    const int m = static_cast<int>(s.size());
    const std::vector<TomoSetting> settings = tomo_basis(m);
    const long ns = static_cast<long>(settings.size());

    const ChoiMatrix reduced = choi::reduce(phi, subset_mask(s));
    std::vector<double> exact(ns);
    for (long k = 0; k < ns; ++k) exact[k] = exact_setting(reduced, settings[k]);

    const auto run_trial = [&](int t) {
        TrialOutcome out;
        out.full.resize(ns);
        for (long k = 0; k < ns; ++k) {
            const RngStream st = rng.sub(static_cast<std::uint64_t>(k)).sub(
                static_cast<std::uint64_t>(t));
            const double ef =
                simulate_setting(phi, s, settings[k], prep, nu, st.sub(0), TomoMode::full);
            const double em =
                simulate_setting(phi, s, settings[k], prep, nu, st.sub(1), TomoMode::exact_prep);
            const double ep =
                simulate_setting(phi, s, settings[k], prep, nu, st.sub(2), TomoMode::exact_meas);
            out.full[k] = ef;
            out.total_sq += (ef - exact[k]) * (ef - exact[k]);
            out.meas_sq += (em - exact[k]) * (em - exact[k]);
            out.prep_sq += (ep - exact[k]) * (ep - exact[k]);
        }
        out.total_sq /= static_cast<double>(ns);
        out.meas_sq /= static_cast<double>(ns);
        out.prep_sq /= static_cast<double>(ns);
        return out;
    };

    std::vector<TrialOutcome> per_trial(trials);
    const int workers = std::max(1, std::min(threads, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) per_trial[t] = run_trial(t);
    } else {
        std::vector<std::future<void>> tasks;
        tasks.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (int t = w; t < trials; t += workers) per_trial[t] = run_trial(t);
            }));
        }
        for (auto& task : tasks) task.get();
    }

    TomoResult res;
    res.nu = nu;
    res.trials = trials;
    res.estimates.assign(ns, 0.0);
    for (const TrialOutcome& out : per_trial)
        for (long k = 0; k < ns; ++k) res.estimates[k] += out.full[k];
    for (long k = 0; k < ns; ++k) res.estimates[k] /= static_cast<double>(trials);
    res.reduced_choi_est = reconstruct(res.estimates, m);

    const auto stats = [&](auto&& pick) {
        double mean = 0.0;
        for (const TrialOutcome& out : per_trial) mean += pick(out);
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (const TrialOutcome& out : per_trial) {
            const double d = pick(out) - mean;
            var += d * d;
        }
        var /= static_cast<double>(trials - 1);
        return std::pair<double, double>(mean, std::sqrt(var / static_cast<double>(trials)));
    };
    std::tie(res.delta_total_sq, res.delta_total_se) =
        stats([](const TrialOutcome& o) { return o.total_sq; });
    std::tie(res.delta_prep_sq, res.delta_prep_se) =
        stats([](const TrialOutcome& o) { return o.prep_sq; });
    std::tie(res.delta_meas_sq, res.delta_meas_se) =
        stats([](const TrialOutcome& o) { return o.meas_sq; });
    std::tie(res.additivity_gap, res.additivity_se) =
        stats([](const TrialOutcome& o) { return o.total_sq - o.prep_sq - o.meas_sq; });
    return res;
}

double classical_sampling_error(const Eigen::VectorXd& p, long nu) {
    if (nu < 1) throw std::invalid_argument("shot count must be positive");
    if (p.size() == 0) throw std::invalid_argument("empty probability vector");
    if (p.minCoeff() < 0.0) throw std::invalid_argument("negative probability entry");
    if (std::abs(p.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("probabilities do not sum to one");
    return (1.0 - p.squaredNorm()) / static_cast<double>(nu);
}

}  // namespace tomo
}  // namespace rpt
