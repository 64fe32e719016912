#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mfe/quantum.hpp"
#include "mfe/types.hpp"

using namespace mfe;

namespace {

ComplexVector ket(std::initializer_list<Complex> amps) {
    ComplexVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (const auto& a : amps) v(i++) = a;
    return v;
}

}  // namespace

TEST_CASE("pure states must be normalized and finite") {
    CHECK_NOTHROW(PureState(ket({1.0, 0.0})));
    CHECK_THROWS_AS(PureState(ket({1.0, 1.0})), std::invalid_argument);
    CHECK_THROWS_AS(PureState(ComplexVector{}), std::invalid_argument);
    const PureState plus(ket({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
    CHECK(plus.dim() == 2);
    CHECK(plus.projector()(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("density matrices reject non-states") {
    ComplexMatrix not_psd(2, 2);
    not_psd << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix{not_psd}, std::invalid_argument);

    ComplexMatrix wrong_trace = 0.7 * ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{wrong_trace}, std::invalid_argument);

    const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
    CHECK(mixed.dim() == 4);
    CHECK(mixed.matrix()(0, 0).real() == doctest::Approx(0.25));
}

TEST_CASE("observables are Hermitian with correct spectrum") {
    ComplexMatrix skew(2, 2);
    skew << 0.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 0.0;
    CHECK_THROWS_AS(Observable{skew}, std::invalid_argument);

    const Observable z(pauli_matrix("Z"), "z");
    CHECK(z.min_eigenvalue() == doctest::Approx(-1.0));
    CHECK(z.max_eigenvalue() == doctest::Approx(1.0));
    CHECK(z.label() == "z");

    const Observable fid = Observable::from_target(basis_state(1, 2));
    CHECK(fid.label() == "fidelity");
    CHECK(fid.max_eigenvalue() == doctest::Approx(1.0));
}

TEST_CASE("povm validation enforces completeness and positivity") {
    const ComplexMatrix p0 = basis_state(0, 2).projector();
    const ComplexMatrix p1 = basis_state(1, 2).projector();
    CHECK_NOTHROW(Povm(2, {p0, p1}));
    CHECK_THROWS_AS(Povm(2, {p0, 0.5 * p1}), std::invalid_argument);
    CHECK_THROWS_AS(Povm(2, {2.0 * p0, p1 - p0}), std::invalid_argument);
}

TEST_CASE("born rule matches direct traces") {
    const DensityMatrix one = DensityMatrix::from_pure(basis_state(1, 2));
    const Povm z_sign(2, {0.5 * (ComplexMatrix::Identity(2, 2) + pauli_matrix("Z")),
                          0.5 * (ComplexMatrix::Identity(2, 2) - pauli_matrix("Z"))});
    const RealVector p = born_distribution(z_sign, one);
    CHECK(p(0) == doctest::Approx(0.0));
    CHECK(p(1) == doctest::Approx(1.0));

    const DensityMatrix state = depolarize(DensityMatrix::from_pure(ghz_state(2)), 0.3);
    const Povm zz(4, {basis_state(0, 4).projector(), basis_state(1, 4).projector(),
                      basis_state(2, 4).projector(), basis_state(3, 4).projector()});
    const RealVector q = born_distribution(zz, state);
    CHECK(q.sum() == doctest::Approx(1.0));
    for (int k = 0; k < 4; ++k) {
        const double direct = (zz.effect(k) * state.matrix()).trace().real();
        CHECK(q(k) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("depolarizing channel endpoints and fidelity") {
    const DensityMatrix ghz = DensityMatrix::from_pure(ghz_state(2));
    const Observable fid = Observable::from_target(ghz_state(2));

    CHECK((depolarize(ghz, 0.0).matrix() - ghz.matrix()).norm() == doctest::Approx(0.0));
    CHECK((depolarize(ghz, 1.0).matrix() - DensityMatrix::maximally_mixed(4).matrix()).norm() ==
          doctest::Approx(0.0));

    for (double lambda : {0.1, 0.25, 0.5}) {
        const double f = expectation_value(fid, depolarize(ghz, lambda));
        CHECK(f == doctest::Approx((1.0 - lambda) + lambda / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("named states have the expected structure") {
    const PureState ghz2 = ghz_state(2);
    CHECK(ghz2.amplitudes()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(ghz2.amplitudes()(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(ghz2.amplitudes()(1)) == doctest::Approx(0.0));

    const PureState w3 = w_state(3);
    for (int idx : {1, 2, 4})
        CHECK(std::abs(w3.amplitudes()(idx)) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(std::abs(w3.amplitudes()(0)) == doctest::Approx(0.0));

    // Cluster stabilizers Z_(i-1) X_i Z_(i+1) fix the chain state.
    const PureState cl3 = cluster_state(3);
    const DensityMatrix cl3_rho = DensityMatrix::from_pure(cl3);
    for (const char* stab : {"XZI", "ZXZ", "IZX"}) {
        const Observable k(pauli_matrix(stab));
        CHECK(expectation_value(k, cl3_rho) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("werner state swap expectation is 2p - 1") {
    for (double p : {0.0, 0.25, 0.5, 1.0}) {
        const Observable swap(swap_matrix(), "swap");
        CHECK(expectation_value(swap, werner_state(p)) ==
              doctest::Approx(2.0 * p - 1.0).epsilon(1e-12));
    }
    const Observable swap(swap_matrix(), "swap");
    const DensityMatrix noisy = depolarize(werner_state(0.25), 0.1);
    CHECK(expectation_value(swap, noisy) == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("swap and pauli tensor helpers") {
    const ComplexMatrix s = swap_matrix();
    ComplexVector v01 = ComplexVector::Zero(4);
    v01(1) = 1.0;
    const ComplexVector swapped = s * v01;
    CHECK(std::abs(swapped(2) - Complex(1.0, 0.0)) == doctest::Approx(0.0));

    const ComplexMatrix xz = pauli_matrix("XZ");
    const ComplexMatrix oracle = kron(pauli_matrix("X"), pauli_matrix("Z"));
    CHECK((xz - oracle).norm() == doctest::Approx(0.0));

    const Observable zz = build_observable("ZZ");
    CHECK((zz.matrix() - kron(pauli_matrix("Z"), pauli_matrix("Z"))).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("random states and rng streams are deterministic") {
    const PureState a = random_pure_state(2, 42);
    const PureState b = random_pure_state(2, 42);
    const PureState c = random_pure_state(2, 43);
    CHECK((a.amplitudes() - b.amplitudes()).norm() == doctest::Approx(0.0));
    CHECK((a.amplitudes() - c.amplitudes()).norm() > 1e-3);
    CHECK(a.amplitudes().norm() == doctest::Approx(1.0));

    auto g1 = rng::stream(7, 0);
    auto g2 = rng::stream(7, 0);
    auto g3 = rng::stream(7, 1);
    CHECK(g1() == g2());
    CHECK(g1() == g2());
    auto g1b = rng::stream(7, 0);
    CHECK(g1b() != g3());
}
