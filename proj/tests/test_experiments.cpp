#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/experiments.hpp"
#include "core/io.hpp"
#include "core/scramble.hpp"
#include "helpers.hpp"

using namespace rpt;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/rpt_expt_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

TEST_CASE("config files parse comments, whitespace, and later-wins overrides") {
    TempFile f("cfg.txt");
    f.write("# a comment\nn = 4\n  ell=2  \nn = 2\n\nstate = ghz:3\n");
    RunConfig cfg = RunConfig::from_file(f.path);
    CHECK(cfg.get_long("n", 0) == 2);  // the later assignment wins
    CHECK(cfg.get_long("ell", 0) == 2);
    CHECK(cfg.get_str("state", "") == "ghz:3");
    CHECK(cfg.get_long("missing", 7) == 7);
    CHECK(cfg.has("ell"));
    CHECK(!cfg.has("missing"));
}

TEST_CASE("config serialization is canonical and drives the hash") {
    RunConfig a;
    a.set("n", "4");
    a.set("ell", "2");
    RunConfig b;
    b.set("ell", "2");
    b.set("n", "4");
    CHECK(a.serialize() == b.serialize());  // sorted keys
    CHECK(a.hash() == b.hash());
    b.set("n", "5");
    CHECK(a.hash() != b.hash());
    CHECK(a.seed() == 1);  // default
    a.set("seed", "99");
    CHECK(a.seed() == 99);
}

TEST_CASE("typed getters validate their values") {
    RunConfig cfg;
    cfg.set("nu", "10,20,30");
    auto list = cfg.get_long_list("nu", {});
    REQUIRE(list.size() == 3);
    CHECK(list[2] == 30);
    cfg.set("bad", "7x");
    CHECK_THROWS_AS(cfg.get_long("bad", 0), parse_error);
    CHECK_THROWS_AS(cfg.get_double("bad", 0.0), parse_error);
    cfg.set("threads", "200");
    CHECK_THROWS_AS(cfg.threads(), std::invalid_argument);
}

TEST_CASE("state tokens cover the builtin catalog and files") {
    CHECK((expt::state_from_token("ghz:3").amp() - scramble::ghz(3).amp()).norm() < 1e-14);
    CHECK((expt::state_from_token("plus:2").amp() - scramble::plus_state(2).amp()).norm() <
          1e-14);
    CHECK((expt::state_from_token("zero:2").amp() - scramble::basis_state(2, 0).amp()).norm() <
          1e-14);
    CHECK((expt::state_from_token("bell-pairs:4").amp() - scramble::bell_pairs(4).amp())
              .norm() < 1e-14);
    CHECK(expt::state_from_token("kuniform:5,2").dim() == 32);
    TempFile f("state.txt");
    io::save_state(f.path, scramble::ghz(2));
    CHECK((expt::state_from_token(f.path).amp() - scramble::ghz(2).amp()).norm() < 1e-12);
    // Malformed tokens are usage errors, not data-file parse failures.
    CHECK_THROWS_AS(expt::state_from_token("ghz:oops"), std::invalid_argument);
}

TEST_CASE("density tokens build uniform states, truncated mixtures, and projectors") {
    DenseOperator u = expt::density_from_token("uniform:4");
    CHECK((u.mat() - 0.25 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    DenseOperator o = expt::density_from_token("orthomix:8,4");
    CHECK(o.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(o.mat()(0, 0) - 0.25) < 1e-14);
    CHECK(std::abs(o.mat()(7, 7)) < 1e-14);
    DenseOperator g = expt::density_from_token("state:ghz:2");
    CHECK((g.mat() - projector(scramble::ghz(2)).mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(expt::density_from_token("orthomix:4,9"), std::invalid_argument);
}

TEST_CASE("sampler tokens map onto the preparation strategies") {
    SamplerSpec h = expt::sampler_from_token("haar-lbit", 4, 2);
    CHECK(h.kind == SamplerKind::haar_blocks);
    CHECK(h.ell == 2);
    SamplerSpec c = expt::sampler_from_token("correlated-identical", 4, 2);
    CHECK(c.kind == SamplerKind::correlated_blocks);
    SamplerSpec r = expt::sampler_from_token("fixed-rotated:ghz:2", 2, 1);
    CHECK(r.kind == SamplerKind::fixed_rotated);
    CHECK(r.base.dim() == 4);
    SamplerSpec k = expt::sampler_from_token("kuniform:5,2", 5, 1);
    CHECK(k.kind == SamplerKind::fixed_rotated);
    CHECK(k.base.dim() == 32);
    CHECK_THROWS_AS(expt::sampler_from_token("nonsense", 4, 1), std::invalid_argument);
}

TEST_CASE("channel tokens construct valid chois") {
    ChoiMatrix h = expt::channel_from_token("heisenberg:2,1.0,1.0,0.5");
    CHECK(h.n() == 2);
    CHECK_NOTHROW(h.validate());
    TempFile f("unitary.txt");
    io::save_operator(f.path, DenseOperator::identity_qubits(1));
    ChoiMatrix u = expt::channel_from_token("unitary:" + f.path);
    CHECK(u.n() == 1);
    CHECK_NOTHROW(u.validate());
    CHECK_THROWS_AS(expt::channel_from_token("teleport:3"), std::invalid_argument);
}

TEST_CASE("converge runs emit the pinned column set and are byte-deterministic") {
    RunConfig cfg;
    cfg.set("strategy", "haar-lbit");
    cfg.set("n", "2");
    cfg.set("ell", "1");
    cfg.set("samples", "500");
    cfg.set("nu", "1,10");
    std::ostringstream a, b;
    expt::run_converge(cfg, a);
    expt::run_converge(cfg, b);
    CHECK(a.str() == b.str());

    auto rows = lines_of(a.str());
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0].rfind("# config_hash=0x", 0) == 0);
    CHECK(rows[1] == "strategy,n,ell,nu,sigma_max_mc,sigma_max_analytic_or_bound,ratio,stderr");
    auto fields = split_csv(rows[2]);
    REQUIRE(fields.size() == 8);
    CHECK(fields[0] == "haar-lbit");
    CHECK(fields[3] == "1");
    // Analytic column carries the block-sampler rate at nu = 1.
    CHECK(std::stod(fields[5]) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    // Second row: nu = 10 divides the rate tenfold.
    auto fields10 = split_csv(rows[3]);
    CHECK(std::stod(fields10[5]) == doctest::Approx(1.0 / 120.0).epsilon(1e-12));

    // Thread count must not change a single byte.
    cfg.set("threads", "2");
    std::ostringstream c;
    expt::run_converge(cfg, c);
    CHECK(a.str() == c.str());
}

TEST_CASE("weights runs tabulate the subset map") {
    RunConfig cfg;
    cfg.set("state", "ghz:2");
    std::ostringstream out;
    expt::run_weights(cfg, out);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 6);  // comment, header, four subsets
    CHECK(rows[1] == "subset_bitmask,size,w_s");
    CHECK(split_csv(rows[2])[0] == "0");
    CHECK(std::stod(split_csv(rows[2])[2]) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::stod(split_csv(rows[5])[2]) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("scramble runs append the summary comment") {
    RunConfig cfg;
    cfg.set("n", "3");
    cfg.set("tmax", "1.0");
    cfg.set("dt", "0.5");
    std::ostringstream out;
    expt::run_scramble(cfg, out);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 6);  // comment, header, three times, summary
    CHECK(rows[1] == "t,max_w,W_1,W_2,W_3");
    CHECK(rows[5].rfind("# tau_prep=", 0) == 0);
    CHECK(rows[5].find("min_max_w=") != std::string::npos);
    CHECK(rows[5].find("haar_floor=") != std::string::npos);
    // Default start is the symmetric product state: frozen trace.
    for (int r = 2; r <= 4; ++r) {
        CHECK(std::stod(split_csv(rows[r])[1]) == doctest::Approx(1.0 / 24.0).epsilon(1e-9));
    }
}

TEST_CASE("tomography runs report per-setting rows plus the error summary") {
    RunConfig cfg;
    cfg.set("channel", "heisenberg:2,1,1,0.7");
    cfg.set("s", "1");
    cfg.set("nu", "60");
    cfg.set("trials", "30");
    std::ostringstream out;
    expt::run_tomography(cfg, out);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 19);  // comment, header, 16 settings, summary
    CHECK(rows[1] == "tau1_id,tau2_id,estimate,exact,sq_error");
    auto last = rows.back();
    CHECK(last.rfind("# delta_prep_sq=", 0) == 0);
    CHECK(last.find("delta_meas_sq=") != std::string::npos);
    CHECK(last.find("delta_total_sq=") != std::string::npos);
    CHECK(last.find("nu=60") != std::string::npos);
    CHECK(last.find("trials=30") != std::string::npos);
    // Estimates track the exact entries loosely at this shot count.
    for (int r = 2; r < 18; ++r) {
        auto f = split_csv(rows[r]);
        REQUIRE(f.size() == 5);
        CHECK(std::abs(std::stod(f[2]) - std::stod(f[3])) < 0.2);
    }
}

TEST_CASE("tomography runs can save the reconstructed matrix") {
    TempFile est("choi_est.txt");
    RunConfig cfg;
    cfg.set("channel", "heisenberg:2,1,1,0.4");
    cfg.set("nu", "60");
    cfg.set("trials", "30");
    cfg.set("choi_out", est.path);
    cfg.set("psd", "1");
    std::ostringstream out;
    expt::run_tomography(cfg, out);
    ChoiMatrix c = io::load_choi(est.path);
    CHECK(c.n() == 1);
    CHECK(c.convention() == ChoiConvention::measurement);
    // Positivity is a property of the raw form; the measurement form is its
    // input-leg partial transpose and need not be PSD itself.
    EigResult e = herm_eig(c.to(ChoiConvention::raw).op());
    CHECK(e.values.minCoeff() > -1e-9);  // psd projection applied
    // The projection preserves the estimate's own trace, which carries shot
    // noise around the ideal 2^m = 2; only the normalization scale is pinned.
    CHECK(c.mat().trace().real() == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("fisher runs tabulate both protocols") {
    RunConfig cfg;
    cfg.set("protocol", "ghz");
    cfg.set("nu", "2,3");
    std::ostringstream out;
    expt::run_fisher(cfg, out);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[1] == "nu,proxy,fisher");
    auto r2 = split_csv(rows[2]);
    CHECK(std::stod(r2[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(r2[2]) == doctest::Approx(4.0).epsilon(1e-7));
    auto r3 = split_csv(rows[3]);
    CHECK(std::stod(r3[1]) == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(std::stod(r3[2]) == doctest::Approx(9.0).epsilon(1e-7));

    RunConfig sep;
    sep.set("protocol", "separable");
    sep.set("nu", "3");
    std::ostringstream sout;
    expt::run_fisher(sep, sout);
    auto srows = lines_of(sout.str());
    auto sf = split_csv(srows[2]);
    CHECK(std::stod(sf[1]) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::stod(sf[2]) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("fidelity runs reproduce the closed-form example") {
    RunConfig cfg;
    cfg.set("rho", "orthomix:8,4");
    cfg.set("sigma", "uniform:8");
    std::ostringstream out;
    expt::run_fidelity(cfg, out);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[1] == "rho,sigma,uhlmann,one_minus_f,frobenius_sq");
    // The rho token contains a comma, so the writer RFC-quotes that field; a
    // naive comma split therefore yields six pieces.  Anchor on the quoted
    // prefix and read the numeric tail fields from the end.
    CHECK(rows[2].rfind("\"orthomix:8,4\",uniform:8,", 0) == 0);
    auto f = split_csv(rows[2]);
    REQUIRE(f.size() == 6);
    CHECK(std::stod(f[4]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(f[5]) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("dispatch rejects unknown subcommands and missing keys") {
    RunConfig cfg;
    std::ostringstream out;
    CHECK_THROWS_AS(expt::run("frobnicate", cfg, out), std::invalid_argument);
    CHECK_THROWS_AS(expt::run("weights", cfg, out), std::invalid_argument);  // no state
    CHECK_THROWS_AS(expt::run("tomography", cfg, out), std::invalid_argument);  // no channel
}

TEST_CASE("identical config and seed reproduce byte-identical output across subcommands") {
    RunConfig cfg;
    cfg.set("channel", "heisenberg:2,1,1,0.3");
    cfg.set("nu", "40");
    cfg.set("trials", "30");
    cfg.set("seed", "7");
    std::ostringstream a, b;
    expt::run("tomography", cfg, a);
    expt::run("tomography", cfg, b);
    CHECK(a.str() == b.str());
    cfg.set("threads", "2");
    std::ostringstream c;
    expt::run("tomography", cfg, c);
    CHECK(a.str() == c.str());
}
