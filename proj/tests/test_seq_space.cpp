#include <doctest.h>

#include <random>
#include <sstream>

#include "hamlock/cutoff.hpp"
#include "hamlock/functional.hpp"
#include "hamlock/io.hpp"
#include "support/oracles.hpp"

using namespace hamlock;
using hamlock::testing::random_sequence;

namespace {
Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }
}  // namespace

TEST_CASE("shift translates support and is a group action") {
    Sequence d = Sequence::delta(0, vec1(3.5));
    Sequence s = shift(d, 5);
    CHECK(s.first() == 5);
    CHECK(s.value(5)[0] == 3.5);
    CHECK(shift(d, 0) == d);

    std::mt19937_64 rng(11);
    Sequence u = random_sequence(rng, 2, -7, 9, 1.0);
    CHECK(shift(shift(u, 3), -3) == u);
}

TEST_CASE("l2 inner product on deltas and hand sums") {
    Sequence e1 = Sequence::delta(0, vec1(1.0));
    CHECK(inner_l2(e1, e1) == 1.0);
    Sequence far = Sequence::delta(5, vec1(1.0));
    CHECK(inner_l2(e1, far) == 0.0);
    Sequence u(1, 0, {1.0, 2.0, 2.0});
    CHECK(inner_l2(u, u) == 9.0);
}

TEST_CASE("star inner product against the single-site hand value") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    double x0 = 2.0;
    Sequence u = Sequence::delta(3, vec1(x0));
    // two difference terms plus the quadratic term
    CHECK(inner_star(u, u, m) == doctest::Approx(2 * x0 * x0 + x0 * x0).epsilon(1e-15));
    CHECK(inner_star(Sequence::zero(1), u, m) == 0.0);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        Sequence a = random_sequence(rng, 1, -6, 6, 1.0);
        Sequence b = random_sequence(rng, 1, -4, 9, 1.0);
        CHECK(inner_star(a, b, m) == doctest::Approx(inner_star(b, a, m)).epsilon(1e-14));
    }
}

TEST_CASE("window energy: full cover equals the star norm, partitions add up") {
    SystemModel m = builtin_model("periodic_scalar", {1.0, 2.0, 4.0});
    std::mt19937_64 rng(17);
    Sequence u = random_sequence(rng, 1, -10, 10, 1.0);
    double full = window_energy(u, IndexSet::range(-11, 12), m);
    CHECK(full == doctest::Approx(inner_star(u, u, m)).epsilon(1e-14));
    CHECK(window_energy(Sequence::zero(1), IndexSet::range(-5, 5), m) == 0.0);

    double left = window_energy(u, IndexSet::range(-11, 0), m);
    double right = window_energy(u, IndexSet::range(1, 12), m);
    CHECK(left + right == doctest::Approx(inner_star(u, u, m)).epsilon(1e-13));
}

TEST_CASE("ramp cutoff weights follow the step profile") {
    // degenerate ramp: sharp characteristic function of the dilated plateau
    Cutoff sharp = ramp_cutoff(IndexSet::range(0, 10), 1);
    CHECK(sharp.weight(-1) == 1.0);
    CHECK(sharp.weight(11) == 1.0);
    CHECK(sharp.weight(-2) == 0.0);
    CHECK(sharp.weight(12) == 0.0);

    Cutoff c = ramp_cutoff(IndexSet::range(0, 10), 4);
    CHECK(c.weight(12) == doctest::Approx(0.75));

    Cutoff c8 = ramp_cutoff(IndexSet::range(0, 10), 8);
    double max_step = 0;
    for (long t = -25; t <= 35; ++t)
        max_step = std::max(max_step, std::abs(c8.weight(t) - c8.weight(t - 1)));
    CHECK(max_step == doctest::Approx(1.0 / 8).epsilon(1e-15));

    CHECK_THROWS_AS(ramp_cutoff(IndexSet::empty_set(), 4), ConfigError);
}

TEST_CASE("apply_cutoff identities") {
    std::mt19937_64 rng(3);
    Sequence u = random_sequence(rng, 2, -8, 8, 1.0);
    Cutoff all = ramp_cutoff(IndexSet::range(-20, 20), 4);
    CHECK(apply_cutoff(all, u) == u);
    CHECK(apply_cutoff(all, Sequence::zero(2)).is_zero());
}

TEST_CASE("cutoff energy doubling holds for every random cutoff and window") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> pos(-30, 30);
    std::uniform_int_distribution<int> ramp(8, 16);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        long a = pos(rng), b = pos(rng);
        if (a > b) std::swap(a, b);
        Cutoff c = ramp_cutoff(IndexSet::range(a, b), ramp(rng));
        long base = pos(rng);
        Sequence u = random_sequence(rng, 1, base - 20, base + 20, 1.0);
        long flo = pos(rng), fhi = pos(rng);
        if (flo > fhi) std::swap(flo, fhi);
        IndexSet F = IndexSet::range(flo, fhi);
        double lhs = window_energy(apply_cutoff(c, u), F, m);
        double rhs = window_energy(u, F.intersect(c.influence()), m);
        if (lhs > 2.0 * rhs + 1e-12) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("summation by parts ties the star product to the assembled operator") {
    SystemModel m = builtin_model("coupled_pair", {1.0, 2.0});
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        Sequence u = random_sequence(rng, 2, -12, 12, 1.0);
        Sequence v = random_sequence(rng, 2, -12, 12, 1.0);
        double lhs = inner_star(u, v, m);
        double rhs = inner_l2(apply_operator_A(u, m), v);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("norm equivalence constants computed from the L spectrum") {
    SystemModel m = builtin_model("periodic_scalar", {1.0, 3.0, 4.0});
    double L1 = m.norm_equivalence_constant();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        Sequence u = random_sequence(rng, 1, -15, 15, 1.0);
        double ns = norm_star(u, m);
        double n2 = std::sqrt(inner_l2(u, u));
        CHECK(n2 <= L1 * ns * (1 + 1e-12));
        CHECK(ns <= L1 * n2 * (1 + 1e-12));
    }
}

TEST_CASE("period shifts are isometries for both inner products") {
    SystemModel m = builtin_model("periodic_scalar", {1.0, 2.0, 4.0});
    std::mt19937_64 rng(37);
    for (int i = 0; i < 20; ++i) {
        Sequence u = random_sequence(rng, 1, -9, 9, 1.0);
        Sequence s = shift(u, 3 * m.period());
        CHECK(inner_l2(s, s) == inner_l2(u, u));
        CHECK(inner_star(s, s, m) == inner_star(u, u, m));
    }
}

TEST_CASE("sequence CSV round-trips bit-exactly") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        Sequence u = random_sequence(rng, i % 2 ? 2 : 1, -6, 14, 3.7);
        std::stringstream ss;
        write_sequence_csv(ss, u);
        Sequence back = read_sequence_csv(ss);
        CHECK(back == u);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    Sequence a(1, 0, {1.0});
    Sequence b(2, 0, {1.0, 2.0});
    CHECK_THROWS_AS(inner_l2(a, b), ConfigError);
    CHECK_THROWS_AS(inner_star(a, b, m), ConfigError);
    CHECK_THROWS_AS(inner_star(b, b, m), ConfigError);
}

TEST_CASE("index set algebra") {
    IndexSet a = IndexSet::range(0, 5).unite(IndexSet::range(10, 12));
    CHECK(a.contains(3));
    CHECK(!a.contains(7));
    CHECK(a.count() == 9);
    CHECK(a.intersect(IndexSet::range(4, 10)) ==
          IndexSet::range(4, 5).unite(IndexSet::range(10, 10)));
    CHECK(a.complement(Window{-2, 14}) ==
          IndexSet::range(-2, -1).unite(IndexSet::range(6, 9)).unite(IndexSet::range(13, 14)));
    CHECK(a.dilate(2) == IndexSet::range(-2, 14));
}
