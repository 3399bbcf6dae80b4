#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/io.hpp"
#include "core/sampling.hpp"
#include "core/scramble.hpp"
#include "helpers.hpp"

using namespace rpt;
using testutil::max_abs_diff;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/rpt_io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

}  // namespace

TEST_CASE("state files round-trip through save and load") {
    Rng rng(RngStream{101, 0});
    StateVector psi = haar::haar_state(8, rng);
    StateVector tagged(psi.amp(), {2, 2, 2});
    TempFile f("state.txt");
    io::save_state(f.path, tagged);
    StateVector back = io::load_state(f.path);
    CHECK(back.qubit_count() == 3);
    CHECK((back.amp() - tagged.amp()).norm() < 1e-12);
}

TEST_CASE("operator files round-trip exactly") {
    Rng rng(RngStream{102, 0});
    Mat m = testutil::random_hermitian(4, rng);
    TempFile f("op.txt");
    io::save_operator(f.path, DenseOperator(m, {2, 2}));
    DenseOperator back = io::load_operator(f.path);
    CHECK(back.factor_dims() == std::vector<int>({2, 2}));
    // %.17g serialization is lossless for doubles.
    CHECK(max_abs_diff(back.mat(), m) == 0.0);
}

TEST_CASE("kraus files carry their operator count") {
    Mat k0(2, 2), k1(2, 2);
    k0 << 1.0, 0.0, 0.0, std::sqrt(0.5);
    k1 << 0.0, std::sqrt(0.5), 0.0, 0.0;
    TempFile f("kraus.txt");
    io::save_kraus(f.path, {k0, k1});
    auto back = io::load_kraus(f.path);
    REQUIRE(back.size() == 2);
    CHECK(max_abs_diff(back[0], k0) < 1e-15);
    CHECK(max_abs_diff(back[1], k1) < 1e-15);
}

TEST_CASE("choi files keep convention and qubit count") {
    Rng rng(RngStream{103, 0});
    ChoiMatrix c = choi::from_unitary(DenseOperator::qubits(testutil::random_unitary(4, rng), 2));
    ChoiMatrix meas = c.to(ChoiConvention::measurement);
    TempFile f("choi.txt");
    io::save_choi(f.path, meas);
    ChoiMatrix back = io::load_choi(f.path);
    CHECK(back.n() == 2);
    CHECK(back.convention() == ChoiConvention::measurement);
    CHECK(max_abs_diff(back.mat(), meas.mat()) < 1e-15);
}

TEST_CASE("choi loads infer the register size from the dimension") {
    TempFile f("choi_infer.txt");
    std::ostringstream text;
    text << "dim 4\n";
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) text << (r == c ? "0.5 " : "0 ");
        text << "\n";
    }
    f.write(text.str());
    ChoiMatrix back = io::load_choi(f.path);
    CHECK(back.n() == 1);
    CHECK(back.convention() == ChoiConvention::raw);  // default
}

TEST_CASE("states loaded from text are renormalized") {
    TempFile f("state_norm.txt");
    f.write("dim 2\n0.6\n0.6\n");
    StateVector psi = io::load_state(f.path);
    CHECK(psi.amp().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("parse failures carry file and line diagnostics") {
    TempFile f("broken.txt");
    SUBCASE("missing header") {
        f.write("0.5 0.5\n");
        try {
            io::load_state(f.path);
            FAIL("expected a parse error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find(f.path) != std::string::npos);
        }
    }
    SUBCASE("bad entry token, with its line number") {
        f.write("dim 2\n0.5\nbanana\n");
        try {
            io::load_state(f.path);
            FAIL("expected a parse error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find(":3:") != std::string::npos);
        }
    }
    SUBCASE("too few entries") {
        f.write("dim 4\n0.5\n");
        CHECK_THROWS_AS(io::load_state(f.path), parse_error);
    }
    SUBCASE("too many entries") {
        f.write("dim 2\n1\n0\n0\n");
        CHECK_THROWS_AS(io::load_state(f.path), parse_error);
    }
    SUBCASE("count header in a state file") {
        f.write("count 2\ndim 2\n1\n0\n");
        CHECK_THROWS_AS(io::load_state(f.path), parse_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(io::load_state("/tmp/rpt_io_test_does_not_exist.txt"), parse_error);
    }
}

TEST_CASE("complex entries accept the re,im form") {
    TempFile f("cplx.txt");
    f.write("dim 2\n0.6,0.0\n0.0,0.8\n");
    StateVector psi = io::load_state(f.path);
    CHECK(std::abs(psi.amp()(0) - cplx(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(psi.amp()(1) - cplx(0.0, 0.8)) < 1e-15);
}

TEST_CASE("format_double round-trips representative values") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.0562015503875968e-05, -7.0 / 864.0}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
}

TEST_CASE("csv writer emits the provenance comment, header, and quoted fields") {
    std::ostringstream out;
    io::CsvWriter csv(out, 0xabcdef0123456789ULL, 42, {"a", "b"});
    csv.row({"1", "plain"});
    csv.row({"2", "with,comma"});
    csv.comment("tail=3");
    const std::string text = out.str();
    CHECK(text.find("# config_hash=0xabcdef0123456789 seed=42\n") == 0);
    CHECK(text.find("a,b\n") != std::string::npos);
    CHECK(text.find("1,plain\n") != std::string::npos);
    CHECK(text.find("2,\"with,comma\"\n") != std::string::npos);
    CHECK(text.find("# tail=3\n") != std::string::npos);
    // Row width is enforced.
    CHECK_THROWS_AS(csv.row({"only-one"}), std::invalid_argument);
}
