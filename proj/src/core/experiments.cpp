#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/convergence.hpp"
#include "core/errors.hpp"
#include "core/fidelity.hpp"
#include "core/io.hpp"
#include "core/metrology.hpp"
#include "core/scramble.hpp"
#include "core/tomography.hpp"
#include "core/util.hpp"

namespace rpt {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long parse_long_strict(const std::string& tok, const std::string& what) {
    try {
        size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad integer in " + what + ": '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("integer out of range in " + what + ": '" + tok + "'");
    }
}

double parse_double_strict(const std::string& tok, const std::string& what) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad number in " + what + ": '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("number out of range in " + what + ": '" + tok + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open config file");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw parse_error(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw parse_error(path + ":" + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = value;
    }
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("empty config key");
    kv_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t used = 0;
        const long v = std::stol(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw parse_error("config value for '" + key + "' is not an integer: '" + it->second +
                          "'");
    }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw parse_error("config value for '" + key + "' is not a number: '" + it->second +
                          "'");
    }
}

std::vector<long> RunConfig::get_long_list(const std::string& key,
                                           const std::vector<long>& fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<long> out;
    for (const std::string& piece : split(it->second, ',')) {
        const std::string t = trim(piece);
        if (t.empty())
            throw parse_error("config value for '" + key + "' has an empty list entry");
        try {
            size_t used = 0;
            const long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(key);
            out.push_back(v);
        } catch (const std::exception&) {
            throw parse_error("config value for '" + key + "' is not an integer list: '" +
                              it->second + "'");
        }
    }
    return out;
}

int RunConfig::threads() const {
    const long t = get_long("threads", 1);
    if (t < 1 || t > 64) throw std::invalid_argument("threads must be between 1 and 64");
    return static_cast<int>(t);
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t RunConfig::hash() const {
    // Only result-determining keys feed the hash: execution plumbing (thread
    // count, output destinations) never changes the numbers, so a rerun with a
    // different threads setting or artifact path reproduces the identical
    // file, comment line included.  Keys that alter produced content (e.g.
    // psd) stay in.
    std::uint64_t h = 14695981039346656037ULL;
    const auto feed = [&h](const std::string& part) {
        for (unsigned char c : part) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : kv_) {
        if (k == "threads" || k == "output" || k == "choi_out") continue;
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

namespace expt {

namespace {

struct Token {
    std::string head;
    std::string rest;  // after the first ':'
    bool has_rest = false;
};

Token split_token(const std::string& token) {
    const size_t pos = token.find(':');
    if (pos == std::string::npos) return {token, "", false};
    return {token.substr(0, pos), token.substr(pos + 1), true};
}

std::pair<int, int> parse_int_pair(const std::string& rest, const std::string& what) {
    const std::vector<std::string> parts = split(rest, ',');
    if (parts.size() != 2) throw std::invalid_argument(what + " needs '<a>,<b>'");
    return {static_cast<int>(parse_long_strict(trim(parts[0]), what)),
            static_cast<int>(parse_long_strict(trim(parts[1]), what))};
}

DenseOperator evolution_unitary(const DenseOperator& h, double t) {
    const EigResult eig = herm_eig(h, 1e-10);
    Vec phases(eig.values.size());
    for (long i = 0; i < eig.values.size(); ++i)
        phases(i) = std::exp(cplx(0.0, -eig.values(i) * t));
    return DenseOperator(Mat(eig.vectors * phases.asDiagonal() * eig.vectors.adjoint()),
                         h.factor_dims());
}

// Collective phase generator sum_q sigma_z^{(q)} / 2 as a diagonal.
Eigen::VectorXd collective_z(int n) {
    Eigen::VectorXd g(1L << n);
    for (long b = 0; b < (1L << n); ++b)
        g(b) = 0.5 * (n - 2 * popcount32(static_cast<std::uint32_t>(b)));
    return g;
}

}  // namespace

StateVector state_from_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty state token");
    const Token t = split_token(token);
    const auto count = [&](const std::string& what) {
        return static_cast<int>(parse_long_strict(t.rest, what));
    };
    if (t.head == "zero" && t.has_rest) return scramble::basis_state(count("zero:<n>"), 0);
    if (t.head == "plus" && t.has_rest) return scramble::plus_state(count("plus:<n>"));
    if (t.head == "ghz" && t.has_rest) return scramble::ghz(count("ghz:<n>"));
    if (t.head == "bell-pairs" && t.has_rest)
        return scramble::bell_pairs(count("bell-pairs:<n>"));
    if (t.head == "kuniform" && t.has_rest) {
        const auto [n, k] = parse_int_pair(t.rest, "kuniform:<n,k>");
        return scramble::kuniform_candidate(n, k);
    }
    return io::load_state(token);
}

DenseOperator density_from_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty density token");
    const Token t = split_token(token);
    if (t.head == "uniform" && t.has_rest) {
        const int d = static_cast<int>(parse_long_strict(t.rest, "uniform:<d>"));
        if (d < 1 || d > kMaxDim) throw dimension_error("uniform dimension out of range");
        Mat m = Mat::Identity(d, d) / static_cast<double>(d);
        int n = 0;
        while ((1 << n) < d) ++n;
        if ((1 << n) == d && d > 1) return DenseOperator::qubits(m, n);
        return DenseOperator(m, {d});
    }
    if (t.head == "orthomix" && t.has_rest) {
        const auto [d, nu] = parse_int_pair(t.rest, "orthomix:<d>,<nu>");
        if (d < 1 || d > kMaxDim) throw dimension_error("orthomix dimension out of range");
        if (nu < 1 || nu > d)
            throw std::invalid_argument("orthomix mixture size must lie in [1, d]");
        Mat m = Mat::Zero(d, d);
        for (int i = 0; i < nu; ++i) m(i, i) = 1.0 / static_cast<double>(nu);
        int n = 0;
        while ((1 << n) < d) ++n;
        if ((1 << n) == d && d > 1) return DenseOperator::qubits(m, n);
        return DenseOperator(m, {d});
    }
    if (t.head == "state" && t.has_rest) return projector(state_from_token(t.rest));
    return io::load_operator(token);
}

SamplerSpec sampler_from_token(const std::string& token, int n, int ell) {
    const Token t = split_token(token);
    if (t.head == "haar-lbit" && !t.has_rest) return SamplerSpec::haar(n, ell);
    if (t.head == "correlated-identical" && !t.has_rest) return SamplerSpec::correlated(n, ell);
    if (t.head == "fixed-rotated" && t.has_rest)
        return SamplerSpec::rotated(state_from_token(t.rest));
    if (t.head == "kuniform" && t.has_rest) {
        const auto [kn, k] = parse_int_pair(t.rest, "kuniform:<n,k>");
        return SamplerSpec::rotated(scramble::kuniform_candidate(kn, k));
    }
    throw std::invalid_argument("unknown preparation strategy '" + token + "'");
}

ChoiMatrix channel_from_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty channel token");
    const Token t = split_token(token);
    if (t.head == "unitary" && t.has_rest) {
        DenseOperator u = io::load_operator(t.rest);
        if (u.factor_dims().size() == 1 && u.dim() > 1) {
            int n = 0;
            while ((1L << n) < u.dim()) ++n;
            if ((1L << n) != u.dim())
                throw validation_error("unitary dimension is not a power of two");
            u = DenseOperator::qubits(u.mat(), n);
        }
        return choi::from_unitary(u);
    }
    if (t.head == "heisenberg" && t.has_rest) {
        const std::vector<std::string> parts = split(t.rest, ',');
        if (parts.size() != 4)
            throw std::invalid_argument("heisenberg:<n,J,h,t> needs four fields");
        ChainSpec spec;
        spec.n = static_cast<int>(parse_long_strict(trim(parts[0]), "heisenberg n"));
        spec.J = parse_double_strict(trim(parts[1]), "heisenberg J");
        spec.h = parse_double_strict(trim(parts[2]), "heisenberg h");
        const double time = parse_double_strict(trim(parts[3]), "heisenberg t");
        return choi::from_unitary(evolution_unitary(scramble::heisenberg(spec), time));
    }
    if (t.head == "kraus" && t.has_rest) return choi::from_kraus(io::load_kraus(t.rest));
    throw std::invalid_argument("unknown channel '" + token + "'");
}

void run_converge(const RunConfig& cfg, std::ostream& out) {
    const std::string strategy = cfg.get_str("strategy", "haar-lbit");
    int n = static_cast<int>(cfg.get_long("n", 0));
    const int ell = static_cast<int>(cfg.get_long("ell", 1));
    const long samples = cfg.get_long("samples", 20000);
    const std::vector<long> nus = cfg.get_long_list("nu", {100});

    const Token t = split_token(strategy);
    const bool needs_n = t.head == "haar-lbit" || t.head == "correlated-identical";
    if (needs_n && n < 1)
        throw std::invalid_argument("strategy '" + strategy + "' needs an explicit n");
    const SamplerSpec spec = sampler_from_token(strategy, n, ell);
    if (n > 0 && spec.n != n)
        throw std::invalid_argument("n conflicts with the strategy token");
    n = spec.n;
    std::pair<int, int> kuni{0, 0};
    if (t.head == "kuniform") kuni = parse_int_pair(t.rest, "kuniform:<n,k>");

    const bool diag_only = n > 4 && spec.kind != SamplerKind::correlated_blocks;
    const ChiEstimate est = conv::chi_monte_carlo(spec, samples, RngStream{cfg.seed(), 0},
                                                  diag_only, cfg.threads());

    io::CsvWriter csv(out, cfg.hash(), cfg.seed(),
                      {"strategy", "n", "ell", "nu", "sigma_max_mc",
                       "sigma_max_analytic_or_bound", "ratio", "stderr"});
    for (long nu : nus) {
        if (nu < 1) throw std::invalid_argument("nu must be positive");
        const double mc = est.sigma_max / static_cast<double>(nu);
        const double se = est.sigma_max_se / static_cast<double>(nu);
        double ref_col = 0.0, ref_nu = 0.0;
        int ell_col = ell;
        switch (spec.kind) {
            case SamplerKind::haar_blocks:
                ref_nu = conv::thm1_rate(n, spec.ell, nu);
                ref_col = ref_nu;
                ell_col = spec.ell;
                break;
            case SamplerKind::correlated_blocks:
                ref_nu = conv::thm1_rate(n, spec.ell, nu);
                ref_col = ref_nu;
                ell_col = spec.ell;
                break;
            case SamplerKind::fixed_rotated:
                if (t.head == "kuniform") {
                    ref_col = conv::thm4_bound(kuni.first, kuni.second, 1);
                    ref_nu = conv::thm4_bound(kuni.first, kuni.second, nu);
                } else {
                    ref_nu = conv::thm3_rate(spec.base, nu, n);
                    ref_col = ref_nu;
                }
                ell_col = n;
                break;
        }
        csv.row({strategy, fmt(n), fmt(ell_col), fmt(nu), fmt(mc), fmt(ref_col),
                 fmt(mc / ref_nu), fmt(se)});
    }
}

void run_weights(const RunConfig& cfg, std::ostream& out) {
    const std::string token = cfg.get_str("state", "");
    if (token.empty()) throw std::invalid_argument("weights needs a 'state'");
    const StateVector psi = state_from_token(token);
    const SubsetWeights w = pauli::weights(pauli::decompose(projector(psi)));

    io::CsvWriter csv(out, cfg.hash(), cfg.seed(), {"subset_bitmask", "size", "w_s"});
    for (long mask = 0; mask < w.w.size(); ++mask)
        csv.row({fmt(mask), fmt(popcount32(static_cast<std::uint32_t>(mask))),
                 fmt(w.w(mask))});
}

void run_scramble(const RunConfig& cfg, std::ostream& out) {
    ChainSpec spec;
    spec.n = static_cast<int>(cfg.get_long("n", 7));
    if (spec.n < 2 || spec.n > 10)
        throw std::invalid_argument("chain length must lie in [2, 10]");
    spec.J = cfg.get_double("J", 1.0);
    spec.h = cfg.get_double("h", 1.0);
    const std::string boundary = cfg.get_str("boundary", "open");
    if (boundary == "periodic")
        spec.boundary = Boundary::periodic;
    else if (boundary != "open")
        throw std::invalid_argument("boundary must be 'open' or 'periodic'");

    const double tmax = cfg.get_double("tmax", 20.0);
    const double dt = cfg.get_double("dt", 0.05);
    if (!(dt > 0.0) || !(tmax >= 0.0)) throw std::invalid_argument("bad time grid");
    const long steps = static_cast<long>(std::floor(tmax / dt + 1e-9));
    if (steps > 100000) throw std::invalid_argument("time grid too fine");
    std::vector<double> grid(steps + 1);
    for (long i = 0; i <= steps; ++i) grid[i] = i * dt;

    const StateVector psi0 =
        state_from_token(cfg.get_str("state", "plus:" + std::to_string(spec.n)));
    const ScrambleTrace tr =
        scramble::scan_scrambling(spec, psi0, grid, cfg.get_long("refine", 0) != 0);

    std::vector<std::string> cols = {"t", "max_w"};
    for (int k = 1; k <= spec.n; ++k) cols.push_back("W_" + std::to_string(k));
    io::CsvWriter csv(out, cfg.hash(), cfg.seed(), cols);
    for (size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<std::string> row = {fmt(tr.times[i]), fmt(tr.max_w[i])};
        for (int k = 1; k <= spec.n; ++k) row.push_back(fmt(tr.level_weights[i](k)));
        csv.row(row);
    }
    csv.comment("tau_prep=" + fmt(tr.tau_prep) + " min_max_w=" + fmt(tr.min_max_w) +
                " haar_floor=" + fmt(tr.haar_floor));
}

void run_tomography(const RunConfig& cfg, std::ostream& out) {
    const std::string channel_token = cfg.get_str("channel", "");
    if (channel_token.empty()) throw std::invalid_argument("tomography needs a 'channel'");
    const ChoiMatrix phi = channel_from_token(channel_token);

    std::vector<int> s;
    for (const std::string& piece : split(cfg.get_str("s", "1"), ','))
        s.push_back(static_cast<int>(parse_long_strict(trim(piece), "subset 's'")));
    const int m = static_cast<int>(s.size());
    if (m >= phi.n())
        throw std::invalid_argument("subset must leave at least one complement qubit");

    const int ell = static_cast<int>(cfg.get_long("ell", 1));
    const SamplerSpec prep =
        sampler_from_token(cfg.get_str("prep", "haar-lbit"), phi.n() - m, ell);
    const long nu = cfg.get_long("nu", 1000);
    const int trials = static_cast<int>(cfg.get_long("trials", 50));

    const TomoResult res = tomo::error_decompose(phi, s, prep, nu, trials,
                                                 RngStream{cfg.seed(), 0}, cfg.threads());

    std::uint32_t mask = 0;
    for (int q : s) mask |= 1u << (q - 1);
    const ChoiMatrix reduced = choi::reduce(phi, mask);
    const std::vector<TomoSetting> settings = tomo::tomo_basis(m);
    const long per = 1L << (2 * m);

    io::CsvWriter csv(out, cfg.hash(), cfg.seed(),
                      {"tau1_id", "tau2_id", "estimate", "exact", "sq_error"});
    for (long k = 0; k < static_cast<long>(settings.size()); ++k) {
        const double exact = tomo::exact_setting(reduced, settings[k]);
        const double est = res.estimates[k];
        csv.row({fmt(k / per), fmt(k % per), fmt(est), fmt(exact),
                 fmt((est - exact) * (est - exact))});
    }
    csv.comment("delta_prep_sq=" + fmt(res.delta_prep_sq) +
                " delta_meas_sq=" + fmt(res.delta_meas_sq) +
                " delta_total_sq=" + fmt(res.delta_total_sq) + " nu=" + fmt(res.nu) +
                " trials=" + fmt(res.trials));

    const std::string choi_out = cfg.get_str("choi_out", "");
    if (!choi_out.empty()) {
        ChoiMatrix target = res.reduced_choi_est;
        if (cfg.get_long("psd", 0) != 0) target = tomo::nearest_psd(target);
        io::save_choi(choi_out, target);
    }
}

void run_fisher(const RunConfig& cfg, std::ostream& out) {
    const std::string protocol = cfg.get_str("protocol", "ghz");
    if (protocol != "ghz" && protocol != "separable")
        throw std::invalid_argument("protocol must be 'ghz' or 'separable'");
    const std::vector<long> nus = cfg.get_long_list("nu", {2, 3, 4, 5, 6});
    const double phi = cfg.get_double("phi", 0.0);

    io::CsvWriter csv(out, cfg.hash(), cfg.seed(), {"nu", "proxy", "fisher"});
    for (long nu : nus) {
        if (nu < 2 || nu > 10)
            throw std::invalid_argument("fisher register count must lie in [2, 10]");
        const int v = static_cast<int>(nu);
        const double proxy =
            protocol == "ghz" ? metro::sensitivity_proxy(metro::ghz_proxy_derivative(v, phi))
                              : metro::sensitivity_proxy(metro::separable_proxy_derivative(v, phi));

        const StateVector base = protocol == "ghz" ? scramble::ghz(v) : scramble::plus_state(v);
        const Eigen::VectorXd g = collective_z(v);
        Vec amp = base.amp();
        for (long b = 0; b < amp.size(); ++b) amp(b) *= std::exp(cplx(0.0, -phi * g(b)));
        const DenseOperator rho = projector(StateVector(amp, base.factor_dims()));
        Mat grho = g.cast<cplx>().asDiagonal() * rho.mat();
        const Mat comm = grho - grho.adjoint();
        const DenseOperator drho(Mat(cplx(0.0, -1.0) * comm), rho.factor_dims());
        const double f = metro::fisher(rho, {drho})(0, 0);

        csv.row({fmt(nu), fmt(proxy), fmt(f)});
    }
}

void run_fidelity(const RunConfig& cfg, std::ostream& out) {
    const std::string rho_token = cfg.get_str("rho", "");
    const std::string sigma_token = cfg.get_str("sigma", "");
    if (rho_token.empty() || sigma_token.empty())
        throw std::invalid_argument("fidelity needs 'rho' and 'sigma'");
    const DenseOperator rho = density_from_token(rho_token);
    const DenseOperator sigma = density_from_token(sigma_token);
    const DistanceReport rep = fid::compare(rho, sigma);

    io::CsvWriter csv(out, cfg.hash(), cfg.seed(),
                      {"rho", "sigma", "uhlmann", "one_minus_f", "frobenius_sq"});
    csv.row({rho_token, sigma_token, fmt(rep.uhlmann), fmt(1.0 - rep.uhlmann),
             fmt(rep.frobenius_sq)});
}

void run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out) {
    if (subcommand == "converge") return run_converge(cfg, out);
    if (subcommand == "weights") return run_weights(cfg, out);
    if (subcommand == "scramble") return run_scramble(cfg, out);
    if (subcommand == "tomography") return run_tomography(cfg, out);
    if (subcommand == "fisher") return run_fisher(cfg, out);
    if (subcommand == "fidelity") return run_fidelity(cfg, out);
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
}

}  // namespace expt
}  // namespace rpt
