#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "core/choi.hpp"
#include "core/errors.hpp"
#include "core/pauli.hpp"
#include "core/sampling.hpp"
#include "core/util.hpp"
#include "helpers.hpp"

using namespace rpt;
using testutil::max_abs_diff;

namespace {

std::vector<Mat> amplitude_damping(double gamma) {
    Mat k0(2, 2), k1(2, 2);
    k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
    k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
    return {k0, k1};
}

}  // namespace

TEST_CASE("choi of the identity channel is the unnormalized maximally entangled projector") {
    ChoiMatrix c = choi::from_unitary(DenseOperator::identity_qubits(1));
    REQUIRE(c.n() == 1);
    REQUIRE(c.convention() == ChoiConvention::raw);
    Mat expect = Mat::Zero(4, 4);
    // sum_{ij} |i i><j j| on (input, output) legs.
    expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
    CHECK(max_abs_diff(c.mat(), expect) < 1e-14);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("apply and expectation agree with direct conjugation") {
    Rng rng(RngStream{41, 0});
    for (int n : {1, 2}) {
        const int d = 1 << n;
        Mat u = testutil::random_unitary(d, rng);
        ChoiMatrix c = choi::from_unitary(DenseOperator::qubits(u, n));
        CHECK_NOTHROW(c.validate());
        Mat rho = testutil::random_density_mat(d, rng);
        Mat obs = testutil::random_hermitian(d, rng);
        DenseOperator rho_op = DenseOperator::qubits(rho, n);
        DenseOperator obs_op = DenseOperator::qubits(obs, n);

        DenseOperator out = choi::apply(c, rho_op);
        CHECK(max_abs_diff(out.mat(), Mat(u * rho * u.adjoint())) < 1e-10);

        const double e = choi::expectation(c, obs_op, rho_op);
        const double direct = (obs * u * rho * u.adjoint()).trace().real();
        CHECK(e == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("convention conversion is an involution and feeds the right formula") {
    Rng rng(RngStream{42, 0});
    Mat u = testutil::random_unitary(4, rng);
    ChoiMatrix raw = choi::from_unitary(DenseOperator::qubits(u, 2));
    ChoiMatrix meas = raw.to(ChoiConvention::measurement);
    CHECK(meas.convention() == ChoiConvention::measurement);
    ChoiMatrix back = meas.to(ChoiConvention::raw);
    CHECK(max_abs_diff(back.mat(), raw.mat()) < 1e-14);
    // Tr(meas (rho x O)) computes the same expectation value.
    Mat rho = testutil::random_density_mat(4, rng);
    Mat obs = testutil::random_hermitian(4, rng);
    Mat ro = kron(DenseOperator::qubits(rho, 2), DenseOperator::qubits(obs, 2)).mat();
    const double via_meas = (meas.mat() * ro).trace().real();
    const double direct = (obs * u * rho * u.adjoint()).trace().real();
    CHECK(via_meas == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("kraus channels validate and act correctly") {
    const double gamma = 0.3;
    ChoiMatrix c = choi::from_kraus(amplitude_damping(gamma));
    CHECK_NOTHROW(c.validate());
    Mat one = Mat::Zero(2, 2);
    one(1, 1) = 1.0;
    DenseOperator out = choi::apply(c, DenseOperator::qubits(one, 1));
    Mat expect(2, 2);
    expect << gamma, 0.0, 0.0, 1.0 - gamma;
    CHECK(max_abs_diff(out.mat(), expect) < 1e-12);

    // Incomplete Kraus sets are rejected.
    auto ks = amplitude_damping(gamma);
    ks.pop_back();
    CHECK_THROWS_AS(choi::from_kraus(ks), validation_error);
}

TEST_CASE("reduced choi equals the uniform-complement channel on the kept qubits") {
    Rng rng(RngStream{43, 0});
    const int n = 3;
    Mat u = testutil::random_unitary(1 << n, rng);
    ChoiMatrix c = choi::from_unitary(DenseOperator::qubits(u, n));

    for (std::uint32_t mask : {0b001u, 0b010u, 0b100u, 0b101u, 0b011u}) {
        const int m = popcount32(mask);
        ChoiMatrix red = choi::reduce(c, mask);
        REQUIRE(red.n() == m);
        // Trace normalization: 2^m.
        CHECK(red.mat().trace().real() == doctest::Approx(double(1 << m)).epsilon(1e-10));

        // Dual route: expectation on the reduced object vs full-register
        // expectation with the complement prepared uniformly mixed.
        Mat rho_s = testutil::random_density_mat(1 << m, rng);
        Mat obs_s = testutil::random_hermitian(1 << m, rng);
        // Assemble full-register rho and obs qubit by qubit.
        std::vector<Mat> rho_f, obs_f;
        // Only product embeddings are needed, so split rho_s across kept
        // qubits via its own factors when m = 1; for m = 2 use a product.
        Mat rho_full, obs_full;
        if (m == 1) {
            rho_full = Mat::Identity(1, 1);
            obs_full = Mat::Identity(1, 1);
            for (int q = 1; q <= n; ++q) {
                const bool kept = mask & (1u << (q - 1));
                rho_full = Eigen::kroneckerProduct(
                               rho_full, kept ? rho_s : Mat(0.5 * Mat::Identity(2, 2)))
                               .eval();
                obs_full =
                    Eigen::kroneckerProduct(obs_full, kept ? obs_s : Mat(Mat::Identity(2, 2)))
                        .eval();
            }
        } else {
            // Product rho_s = r1 x r2 and obs_s = o1 x o2 on the kept pair.
            Mat r1 = testutil::random_density_mat(2, rng);
            Mat r2 = testutil::random_density_mat(2, rng);
            Mat o1 = testutil::random_hermitian(2, rng);
            Mat o2 = testutil::random_hermitian(2, rng);
            rho_s = Eigen::kroneckerProduct(r1, r2);
            obs_s = Eigen::kroneckerProduct(o1, o2);
            int seen = 0;
            rho_full = Mat::Identity(1, 1);
            obs_full = Mat::Identity(1, 1);
            for (int q = 1; q <= n; ++q) {
                const bool kept = mask & (1u << (q - 1));
                Mat rq = kept ? (seen == 0 ? r1 : r2) : Mat(0.5 * Mat::Identity(2, 2));
                Mat oq = kept ? (seen == 0 ? o1 : o2) : Mat(Mat::Identity(2, 2));
                if (kept) ++seen;
                rho_full = Eigen::kroneckerProduct(rho_full, rq).eval();
                obs_full = Eigen::kroneckerProduct(obs_full, oq).eval();
            }
        }
        const double via_reduced =
            choi::expectation(red, DenseOperator::qubits(obs_s, m),
                              DenseOperator::qubits(rho_s, m));
        const double via_full =
            choi::expectation(c, DenseOperator::qubits(obs_full, n),
                              DenseOperator::qubits(rho_full, n));
        CHECK(via_reduced == doctest::Approx(via_full).epsilon(1e-9));
    }
}

TEST_CASE("reduced choi of a unitary channel is doubly stochastic") {
    Rng rng(RngStream{44, 0});
    Mat u = testutil::random_unitary(8, rng);
    ChoiMatrix red = choi::reduce(choi::from_unitary(DenseOperator::qubits(u, 3)), 0b010u);
    // Marginal over the output leg: identity (trace preservation).
    DenseOperator in_marg = partial_trace(red.op(), {1});
    CHECK(max_abs_diff(in_marg.mat(), Mat(Mat::Identity(2, 2))) < 1e-9);
    // Marginal over the input leg: identity (unitality).
    DenseOperator out_marg = partial_trace(red.op(), {2});
    CHECK(max_abs_diff(out_marg.mat(), Mat(Mat::Identity(2, 2))) < 1e-9);
}

TEST_CASE("reducing to the full register only rescales") {
    Rng rng(RngStream{45, 0});
    Mat u = testutil::random_unitary(4, rng);
    ChoiMatrix c = choi::from_unitary(DenseOperator::qubits(u, 2));
    ChoiMatrix red = choi::reduce(c, 0b11u);
    CHECK(max_abs_diff(red.mat(), c.mat()) < 1e-12);
    CHECK_THROWS_AS(choi::reduce(c, 0u), std::invalid_argument);
    CHECK_THROWS_AS(choi::reduce(c, 0b100u), std::invalid_argument);
}

TEST_CASE("product_channel matches the choi of the tensor-product unitary") {
    Rng rng(RngStream{46, 0});
    Mat u = testutil::random_unitary(2, rng);
    Mat v = testutil::random_unitary(4, rng);
    ChoiMatrix cu = choi::from_unitary(DenseOperator::qubits(u, 1));
    ChoiMatrix cv = choi::from_unitary(DenseOperator::qubits(v, 2));
    ChoiMatrix prod = choi::product_channel(cu, cv);
    ChoiMatrix direct = choi::from_unitary(
        kron(DenseOperator::qubits(u, 1), DenseOperator::qubits(v, 2)));
    REQUIRE(prod.n() == 3);
    CHECK(prod.convention() == ChoiConvention::raw);
    CHECK(max_abs_diff(prod.mat(), direct.mat()) < 1e-12);
}

TEST_CASE("phi parametrization of unital single-qubit channels") {
    // Identity channel: phi = diag(1/2, 1/2, 1/2).
    ChoiMatrix id = choi::from_unitary(DenseOperator::identity_qubits(1));
    PhiParams p = choi::phi_params(id);
    CHECK(max_abs_diff(Mat(p.phi.cast<cplx>()), Mat(0.5 * Mat::Identity(3, 3))) < 1e-12);

    // Round trip through phi_to_choi for a generic unitary channel.
    Rng rng(RngStream{47, 0});
    Mat u = testutil::random_unitary(2, rng);
    ChoiMatrix c = choi::from_unitary(DenseOperator::qubits(u, 1));
    PhiParams q = choi::phi_params(c);
    ChoiMatrix rebuilt = choi::phi_to_choi(q);
    CHECK(max_abs_diff(rebuilt.to(ChoiConvention::raw).mat(), c.mat()) < 1e-10);

    // Non-unital channels are rejected.
    ChoiMatrix damp = choi::from_kraus(amplitude_damping(0.4));
    CHECK_THROWS_AS(choi::phi_params(damp), validation_error);
}

TEST_CASE("process fidelity separates equal and distinct channels") {
    ChoiMatrix id = choi::from_unitary(DenseOperator::identity_qubits(1));
    ProcessFidelity same = choi::process_fidelity(id, id);
    CHECK(same.state_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(same.avg_fidelity == doctest::Approx(1.0).epsilon(1e-10));

    // Full dephasing against the identity: choi-state fidelity 1/2 and the
    // textbook average fidelity 2/3.
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k1(1, 1) = 1.0;
    ChoiMatrix deph = choi::from_kraus({k0, k1});
    ProcessFidelity pf = choi::process_fidelity(id, deph);
    CHECK(pf.state_fidelity == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pf.avg_fidelity == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("choi construction rejects malformed inputs") {
    CHECK_THROWS_AS(ChoiMatrix(2, Mat::Identity(8, 8), ChoiConvention::raw),
                    std::invalid_argument);
    CHECK_THROWS_AS(choi::from_unitary(DenseOperator::identity(3)), std::invalid_argument);
    // A non-unitary matrix is rejected at construction.
    Mat g(2, 2);
    g << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(choi::from_unitary(DenseOperator::qubits(g, 1)), std::invalid_argument);
}
