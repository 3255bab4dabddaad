#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "mdiq/povm.hpp"
#include "test_helpers.hpp"

using namespace mdiq;
using test_helpers::PairGen;

namespace {
const PovmPair kIdealZ = povm_from_effect(0.5, {0.0, 0.0, 1.0});
const PovmPair kWhiteNoise = povm_from_effect(0.5, {0.0, 0.0, 0.0});
const PovmPair kAttack = povm_from_effect(0.75, {0.0, 0.0, 1.0 / 3.0});
}  // namespace

TEST_SUITE("povm") {

TEST_CASE("born probabilities for named states and effects") {
    CHECK(born_prob(BlochState::plus(), {0.5, {0.0, 0.0, 1.0}}) == doctest::Approx(0.5));
    CHECK(born_prob(BlochState::zero(), {0.5, {0.0, 0.0, 1.0}}) == doctest::Approx(1.0));
    CHECK(born_prob(BlochState::plus(), {0.75, {0.0, 0.0, 1.0 / 3.0}}) == doctest::Approx(0.75));
}

TEST_CASE("born probabilities sum to one across any pair") {
    PairGen gen(101);
    for (int i = 0; i < 200; ++i) {
        PovmPair p = gen.pair();
        BlochState s = gen.pure_state();
        double p0 = born_prob(s, p.f0);
        double p1 = born_prob(s, p.f1);
        CHECK(p0 >= -kTol);
        CHECK(p1 >= -kTol);
        CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("born_prob rejects invalid arguments") {
    CHECK_THROWS_AS(born_prob({{2.0, 0.0, 0.0}}, kIdealZ.f0), std::invalid_argument);
    CHECK_THROWS_AS(born_prob(BlochState::zero(), PovmEffect{-0.1, {0.0, 0.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("validate_povm accepts the ideal Z and white-noise pairs") {
    CHECK(validate_povm(kIdealZ).empty());
    CHECK(validate_povm(kWhiteNoise).empty());
}

TEST_CASE("validate_povm reports broken completeness with a residual") {
    PovmPair bad;
    bad.f0 = {0.75, {0.0, 0.0, 1.0}};
    bad.f1 = {0.25, {0.0, 0.0, 1.0}};
    auto violations = validate_povm(bad);
    REQUIRE(!violations.empty());
    bool found = false;
    for (const auto& v : violations)
        if (v.constraint == "a1 n1 + a2 n2 = 0") {
            found = true;
            CHECK(v.residual == doctest::Approx(1.0));
        }
    CHECK(found);
}

TEST_CASE("canonicalize orders by weight and flags the relabel") {
    SUBCASE("ideal Z is already canonical") {
        auto c = canonicalize(kIdealZ);
        CHECK(!c.swapped);
        CHECK(c.pair.f0.a == doctest::Approx(0.5));
    }
    SUBCASE("the post-selection attack pair is relabeled") {
        auto c = canonicalize(kAttack);
        CHECK(c.swapped);
        CHECK(c.pair.f0.a == doctest::Approx(0.25));
        CHECK(c.pair.f0.n[2] == doctest::Approx(-1.0));
        CHECK(c.pair.f1.a == doctest::Approx(0.75));
        CHECK(c.pair.f1.n[2] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("an already-canonical asymmetric pair is untouched") {
        PovmPair p = povm_from_effect(0.3, {0.2, 0.1, 0.4});
        auto c = canonicalize(p);
        CHECK(!c.swapped);
        CHECK(c.pair.f0.a == doctest::Approx(0.3));
    }
}

TEST_CASE("canonicalize is idempotent and preserves validity") {
    PairGen gen(202);
    for (int i = 0; i < 200; ++i) {
        PovmPair p = gen.pair();
        auto once = canonicalize(p);
        auto twice = canonicalize(once.pair);
        CHECK(!twice.swapped);
        CHECK(is_valid_povm(once.pair));
        CHECK(once.pair.f0.a <= once.pair.f1.a + kTol);
    }
}

TEST_CASE("example_decomposition on the named pairs") {
    SUBCASE("ideal Z is already a projector pair") {
        Decomposition d = example_decomposition(kIdealZ);
        CHECK(d.c == doctest::Approx(0.0));
        REQUIRE(d.branches.size() == 1);
        CHECK(d.branches[0].p == doctest::Approx(1.0));
        CHECK(d.branches[0].psi.r[2] == doctest::Approx(1.0));
    }
    SUBCASE("white noise splits into the antipodal Z projectors") {
        Decomposition d = example_decomposition(kWhiteNoise);
        CHECK(d.c == doctest::Approx(0.0));
        REQUIRE(d.branches.size() == 2);
        CHECK(d.branches[0].p == doctest::Approx(0.5));
        CHECK(d.branches[1].p == doctest::Approx(0.5));
        CHECK(d.branches[0].psi.r[2] == doctest::Approx(1.0));
        CHECK(d.branches[1].psi.r[2] == doctest::Approx(-1.0));
    }
    SUBCASE("the canonicalized attack pair is forced onto one projector") {
        Decomposition d = example_decomposition(canonicalize(kAttack).pair);
        CHECK(d.c == doctest::Approx(0.5));
        REQUIRE(d.branches.size() == 1);
        CHECK(d.branches[0].p == doctest::Approx(0.5));
        CHECK(d.branches[0].psi.r[2] == doctest::Approx(-1.0));
    }
}

TEST_CASE("example_decomposition rejects non-canonical pairs") {
    CHECK_THROWS_AS(example_decomposition(kAttack), std::invalid_argument);
}

TEST_CASE("example_decomposition reconstructs the effect exactly") {
    PairGen gen(303);
    for (int i = 0; i < 300; ++i) {
        PovmPair p = canonicalize(gen.pair()).pair;
        Decomposition d = example_decomposition(p);

        double weight = d.c + d.branch_weight();
        CHECK(weight == doctest::Approx(1.0).epsilon(1e-12));

        // F0 = sum p_i (I + r_i . sigma) / 2 in Bloch components.
        double a = 0.0;
        Vec3 v{0.0, 0.0, 0.0};
        for (const auto& b : d.branches) {
            a += 0.5 * b.p;
            v = add(v, scale(0.5 * b.p, b.psi.r));
        }
        CHECK(std::abs(a - p.f0.a) <= 1e-12);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(v[k] - p.f0.a * p.f0.n[k]) <= 1e-12);
    }
}

TEST_CASE("decomposition_randomness on hand-built decompositions") {
    SUBCASE("a single Z projector against |+> yields one full bit") {
        Decomposition d{0.0, {{1.0, BlochState::zero()}}};
        CHECK(decomposition_randomness(d, BlochState::plus()) == doctest::Approx(1.0));
    }
    SUBCASE("a purely deterministic decomposition yields nothing") {
        Decomposition d{1.0, {}};
        CHECK(decomposition_randomness(d, BlochState::plus()) == doctest::Approx(0.0));
        CHECK(decomposition_randomness(d, BlochState::zero()) == doctest::Approx(0.0));
    }
    SUBCASE("the attack's forced decomposition yields half a bit") {
        Decomposition d{0.5, {{0.5, BlochState::one()}}};
        CHECK(decomposition_randomness(d, BlochState::plus()) == doctest::Approx(0.5));
    }
    SUBCASE("branches along the input axis are deterministic") {
        Decomposition d{0.0, {{0.5, BlochState::plus()}, {0.5, {{-1.0, 0.0, 0.0}}}}};
        CHECK(decomposition_randomness(d, BlochState::plus()) == doctest::Approx(0.0));
    }
}

TEST_CASE("decomposition_randomness rejects mixed inputs") {
    Decomposition d{0.0, {{1.0, BlochState::zero()}}};
    CHECK_THROWS_AS(decomposition_randomness(d, BlochState{{0.0, 0.0, 0.5}}),
                    std::invalid_argument);
}

}  // TEST_SUITE
