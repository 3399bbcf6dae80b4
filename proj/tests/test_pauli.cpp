#include <doctest.h>

#include "core/pauli.hpp"
#include "core/sampling.hpp"
#include "core/scramble.hpp"
#include "core/util.hpp"
#include "helpers.hpp"

using namespace rpt;
using testutil::max_abs_diff;

namespace {

// Independent oracle for the transform: coefficient i is the Hilbert-Schmidt
// inner product with the dense normalized string, one trace per string.
Eigen::VectorXd naive_decompose(const DenseOperator& op) {
    const int n = op.qubit_count();
    const long count = 1L << (2 * n);
    Eigen::VectorXd v(count);
    for (long i = 0; i < count; ++i) {
        const Mat s = pauli::string_matrix(i, n).mat();
        v(i) = (s * op.mat()).trace().real();
    }
    return v;
}

}  // namespace

TEST_CASE("fast transform agrees with the per-string trace oracle") {
    Rng rng(RngStream{21, 0});
    for (int n = 1; n <= 4; ++n) {
        DenseOperator op(testutil::random_hermitian(1 << n, rng),
                         std::vector<int>(n, 2));
        PauliVector v = pauli::decompose(op);
        REQUIRE(v.n == n);
        REQUIRE(v.coeffs.size() == (1L << (2 * n)));
        CHECK(max_abs_diff(v.coeffs, naive_decompose(op)) < 1e-10);
    }
}

TEST_CASE("reconstruct inverts decompose") {
    Rng rng(RngStream{22, 0});
    for (int n : {1, 3}) {
        DenseOperator op(testutil::random_hermitian(1 << n, rng),
                         std::vector<int>(n, 2));
        DenseOperator back = pauli::reconstruct(pauli::decompose(op));
        CHECK(max_abs_diff(back.mat(), op.mat()) < 1e-12);
    }
}

TEST_CASE("string indexing is base 4 with qubit 1 most significant") {
    // Z on qubit 1 of two: digits (3, 0), index 12.
    DenseOperator zi = kron(DenseOperator(sigma(3), {2}), DenseOperator::identity_qubits(1));
    PauliVector v = pauli::decompose(zi);
    for (long i = 0; i < 16; ++i) {
        CHECK(v.coeffs(i) == doctest::Approx(i == 12 ? 2.0 : 0.0).epsilon(1e-12));
    }
    // string_matrix(12, 2) = Z x I / 2.
    CHECK(max_abs_diff(pauli::string_matrix(12, 2).mat(), Mat(0.5 * zi.mat())) < 1e-14);
}

TEST_CASE("support_mask maps string digits to qubit bits") {
    // n = 3, string X I Z: digits (1, 0, 3) -> index 19; support {qubit1, qubit3}.
    CHECK(pauli::support_mask(19, 3) == 0b101u);
    CHECK(pauli::support_mask(0, 3) == 0u);
    // All-Y string.
    CHECK(pauli::support_mask(2 * 16 + 2 * 4 + 2, 3) == 0b111u);
}

TEST_CASE("decompose flags non-Hermitian input") {
    Mat bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(pauli::decompose(DenseOperator(bad, {2})), numeric_error);
}

TEST_CASE("subset weights of the two-qubit GHZ projector") {
    SubsetWeights w = pauli::weights(pauli::decompose(projector(scramble::ghz(2))));
    REQUIRE(w.w.size() == 4);
    CHECK(w.w(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(w.w(1)) < 1e-12);
    CHECK(std::abs(w.w(2)) < 1e-12);
    CHECK(w.w(3) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(w.max_nonempty() == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("product states spread weight binomially over subsets") {
    const int n = 3;
    SubsetWeights w = pauli::weights(pauli::decompose(projector(scramble::plus_state(n))));
    for (int s = 0; s < (1 << n); ++s) {
        const double expect = std::pow(3.0, -popcount32(s)) / (1 << n);
        CHECK(w.w(s) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(w.max_nonempty() == doctest::Approx(1.0 / (3 << n)).epsilon(1e-12));
    Eigen::VectorXd lv = w.level_sums();
    REQUIRE(lv.size() == n + 1);
    // W_k = C(n, k)/2^n for a product of single-qubit pure states.
    CHECK(lv(0) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(lv(1) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(lv(2) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(lv(3) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("weighted total equals the purity") {
    Rng rng(RngStream{23, 0});
    // Pure states sum to one.  haar_state carries a single {8} factor, so
    // retag it as a three-qubit register before the subset decomposition.
    SubsetWeights wp = pauli::weights(pauli::decompose(
        projector(StateVector::qubits(haar::haar_state(8, rng).amp(), 3))));
    CHECK(wp.weighted_total() == doctest::Approx(1.0).epsilon(1e-10));
    // A mixed state sums to its purity.
    Mat rho = testutil::random_density_mat(4, rng);
    SubsetWeights wm = pauli::weights(pauli::decompose(DenseOperator(rho, {2, 2})));
    CHECK(wm.weighted_total() ==
          doctest::Approx((rho * rho).trace().real()).epsilon(1e-10));
    // Identity weight is fixed by normalization alone.
    CHECK(wm.w(0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("weights are invariant under single-qubit rotations") {
    Rng rng(RngStream{24, 0});
    StateVector base = scramble::ghz(3);
    DenseOperator u = haar::random_local_rotations(3, rng);
    Vec rotated = u.mat() * base.amp();
    SubsetWeights wa = pauli::weights(pauli::decompose(projector(base)));
    SubsetWeights wb = pauli::weights(
        pauli::decompose(projector(StateVector::qubits(rotated, 3))));
    CHECK(max_abs_diff(wa.w, wb.w) < 1e-10);
}

TEST_CASE("string constructors reject out-of-range requests") {
    CHECK_THROWS_AS(pauli::string_matrix(16, 1), std::invalid_argument);
    CHECK_THROWS_AS(pauli::string_matrix(0, 7), dimension_error);
    CHECK_THROWS_AS(pauli::support_mask(-1, 2), std::invalid_argument);
}
