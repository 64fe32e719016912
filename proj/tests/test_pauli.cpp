#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mfe/pauli.hpp"
#include "mfe/quantum.hpp"

using namespace mfe;

TEST_CASE("pauli parsing round-trips and rejects junk") {
    CHECK(PauliString::parse("XYZ").to_string() == "XYZ");
    CHECK(PauliString::parse("-XX").to_string() == "-XX");
    CHECK(PauliString::parse("+ZI").to_string() == "ZI");
    CHECK(PauliString::parse("II").is_identity());
    CHECK_FALSE(PauliString::parse("-II").is_identity());
    CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
    CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
    CHECK(PauliString::parse("-XYZ").unsigned_string() == "XYZ");
}

TEST_CASE("pauli matrices match the dense oracle") {
    for (const char* text : {"X", "Y", "Z", "XZ", "YY", "IZX"}) {
        const ComplexMatrix lhs = PauliString::parse(text).matrix();
        const ComplexMatrix rhs = pauli_matrix(text);
        CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
    }
    const ComplexMatrix negated = PauliString::parse("-XZ").matrix();
    CHECK((negated + pauli_matrix("XZ")).norm() == doctest::Approx(0.0));
}

TEST_CASE("pauli products track signs and reject imaginary phases") {
    const PauliString xx = PauliString::parse("XX");
    const PauliString yy = PauliString::parse("YY");
    const PauliString zz = PauliString::parse("ZZ");

    const PauliString xxyy = xx * yy;
    CHECK(xxyy.to_string() == "-ZZ");
    CHECK((xxyy.matrix() - xx.matrix() * yy.matrix()).norm() == doctest::Approx(0.0));

    const PauliString squared = xx * xx;
    CHECK(squared.is_identity());
    CHECK(squared.sign() == 1);

    CHECK((xx * zz).to_string() == "-YY");
    CHECK_THROWS_AS(PauliString::parse("X") * PauliString::parse("Y"), std::invalid_argument);
}

TEST_CASE("commutation follows the anticommuting-position parity") {
    CHECK_FALSE(PauliString::parse("X").commutes_with(PauliString::parse("Z")));
    CHECK(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));
    CHECK(PauliString::parse("XI").commutes_with(PauliString::parse("IX")));
    CHECK_FALSE(PauliString::parse("XY").commutes_with(PauliString::parse("XX")));
}

TEST_CASE("stabilizer specs demand commuting independent generators") {
    CHECK_NOTHROW(StabilizerGroupSpec::parse({"XX", "ZZ"}));
    CHECK_THROWS_AS(StabilizerGroupSpec::parse({"XX", "XY"}), std::invalid_argument);
    CHECK_THROWS_AS(StabilizerGroupSpec::parse({"XX", "-XX"}), std::invalid_argument);
    CHECK_THROWS_AS(StabilizerGroupSpec::parse({"XX", "ZZ", "-YY"}), std::invalid_argument);
    CHECK_THROWS_AS(StabilizerGroupSpec::parse({"XX", "ZZZ"}), std::invalid_argument);
}

TEST_CASE("group enumeration covers all non-identity elements") {
    const StabilizerGroupSpec ghz2 = StabilizerGroupSpec::parse({"XX", "ZZ"});
    const auto elements = ghz2.enumerate_nonidentity();
    REQUIRE(elements.size() == 3);
    CHECK(elements[0].to_string() == "XX");
    CHECK(elements[1].to_string() == "ZZ");
    CHECK(elements[2].to_string() == "-YY");

    const StabilizerGroupSpec ghz3 = StabilizerGroupSpec::parse({"XXX", "ZZI", "IZZ"});
    const auto group = ghz3.enumerate_nonidentity();
    REQUIRE(group.size() == 7);
    const PureState ghz = ghz_state(3);
    for (const auto& g : group)
        CHECK(pauli_expectation(g, ghz) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all_nonidentity_paulis is lexicographic and complete") {
    const auto singles = all_nonidentity_paulis(1);
    REQUIRE(singles.size() == 3);
    CHECK(singles[0].to_string() == "X");
    CHECK(singles[2].to_string() == "Z");

    const auto pairs = all_nonidentity_paulis(2);
    REQUIRE(pairs.size() == 15);
    CHECK(pairs[0].to_string() == "IX");
    CHECK(pairs[3].to_string() == "XI");
    CHECK(pairs[14].to_string() == "ZZ");
    CHECK(std::is_sorted(pairs.begin(), pairs.end()));
}

TEST_CASE("bit-action expectation agrees with the dense oracle") {
    const auto paulis = all_nonidentity_paulis(2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PureState psi = random_pure_state(2, seed);
        for (const auto& p : paulis) {
            const double fast = pauli_expectation(p, psi);
            const Complex dense =
                (psi.amplitudes().adjoint() * p.matrix() * psi.amplitudes())(0, 0);
            CHECK(fast == doctest::Approx(dense.real()).epsilon(1e-12));
        }
    }
    const PureState ghz = ghz_state(2);
    CHECK(pauli_expectation(PauliString::parse("-YY"), ghz) == doctest::Approx(1.0));
    CHECK(pauli_expectation(PauliString::parse("ZI"), ghz) == doctest::Approx(0.0));
}
