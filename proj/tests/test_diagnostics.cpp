#include <doctest.h>

#include <random>

#include "hamlock/diagnostics.hpp"
#include "hamlock/multibump.hpp"
#include "support/oracles.hpp"

using namespace hamlock;

namespace {
const SystemModel& cubic() {
    static SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    return m;
}

const Sequence& bump() {
    static Sequence v = [] {
        OneBumpConfig cfg;
        cfg.window = 80;
        OneBumpResult r = find_one_bump(cubic(), cfg);
        REQUIRE(r.report.converged);
        return r.report.solution;
    }();
    return v;
}

std::vector<int> n_grid() { return {8, 16, 32}; }
std::vector<double> eps_grid() { return {0.1, 0.02}; }

MassProfile uniform_profile(long k) {
    MassProfile p;
    p.base = -k;
    p.values.assign(2 * k + 1, 1.0 / (2 * k + 1));
    return p;
}

// Half the bump's mass at 0, half at separation 2k.
MassProfile split_profile(long k) {
    const Sequence& v = bump();
    double total = inner_l2(v, v);
    MassProfile p;
    p.base = v.first();
    p.values.assign(v.last() - v.first() + 1 + 2 * k, 0.0);
    for (long t = v.first(); t <= v.last(); ++t) {
        double w = v.site(t).squaredNorm() / (2.0 * total);
        p.values[t - v.first()] += w;
        p.values[t - v.first() + 2 * k] += w;
    }
    return p;
}
}  // namespace

TEST_CASE("uniform spreading is classified as vanishing") {
    std::vector<MassProfile> rhos;
    for (long k = 10; k <= 100; k += 10) rhos.push_back(uniform_profile(k));
    CCVerdict v = cc_classify(rhos, eps_grid(), n_grid());
    CHECK(v.kind == CCKind::vanishing);
}

TEST_CASE("a translating soliton is classified as concentration") {
    std::vector<MassProfile> rhos;
    for (long k = 10; k <= 100; k += 10)
        rhos.push_back(MassProfile::from_sequence(shift(bump(), k)));
    CCVerdict v = cc_classify(rhos, eps_grid(), n_grid());
    CHECK(v.kind == CCKind::concentration);
    // centers track the translation
    for (size_t i = 0; i < v.centers.size(); ++i)
        CHECK(std::labs(v.centers[i] - static_cast<long>(10 * (i + 1))) <= 2);
}

TEST_CASE("two separating half-solitons are classified as dichotomy") {
    std::vector<MassProfile> rhos;
    for (long k = 10; k <= 100; k += 10) rhos.push_back(split_profile(k));
    CCVerdict v = cc_classify(rhos, eps_grid(), n_grid());
    CHECK(v.kind == CCKind::dichotomy);
    CHECK(v.eta >= 0.45);
    CHECK(v.eta <= 0.55);
}

TEST_CASE("classification is shift invariant") {
    std::vector<MassProfile> a, b;
    for (long k = 10; k <= 100; k += 10) {
        a.push_back(MassProfile::from_sequence(shift(bump(), k)));
        MassProfile s = a.back();
        s.base += 137;
        b.push_back(s);
    }
    CHECK(cc_classify(a, eps_grid(), n_grid()).kind ==
          cc_classify(b, eps_grid(), n_grid()).kind);
}

TEST_CASE("profiles must be normalized") {
    MassProfile bad;
    bad.base = 0;
    bad.values = {0.4, 0.4};
    std::vector<MassProfile> rhos(6, bad);
    CHECK_THROWS_AS(cc_classify(rhos, eps_grid(), n_grid()), ConfigError);
}

TEST_CASE("bump decomposition: single bump, glued train, zero") {
    BumpDecomposition one = bump_decompose(bump(), cubic(), 3, 1e-3);
    REQUIRE(one.bumps.size() == 1);
    CHECK(one.bumps[0].center == 0);
    CHECK(one.remainder_norm <= 1e-3 * norm_star(bump(), cubic()));

    Window bound = Window::symmetric(400);
    SeparationVector P = make_separation(2, 4, 1, 96, bound);
    Sequence train = glue(bump(), P, bound);
    BumpDecomposition two = bump_decompose(train, cubic(), 5, 1e-3);
    REQUIRE(two.bumps.size() == 2);
    CHECK(std::labs(two.bumps[0].center - P.points[0]) <= 1);
    CHECK(std::labs(two.bumps[1].center - P.points[1]) <= 1);
    CHECK(two.remainder_norm <= 1e-6 * norm_star(train, cubic()));

    BumpDecomposition none = bump_decompose(Sequence::zero(1), cubic(), 3, 1e-3);
    CHECK(none.bumps.empty());
    CHECK(none.remainder_norm == 0.0);
}

TEST_CASE("too many bumps points at a threshold problem") {
    // 70 spikes: more than the decomposition is willing to track
    std::vector<double> vals;
    Sequence u(1);
    for (int i = 0; i < 70; ++i) u += Sequence::delta(10 * i, Eigen::VectorXd::Constant(1, 1.0));
    CHECK_THROWS_AS(bump_decompose(u, cubic(), 3, 1e-6), NumericsError);
}

TEST_CASE("decay rate: exact geometric fit, solver bump, short tails") {
    std::vector<double> geo;
    for (long t = -20; t <= 20; ++t) geo.push_back(std::pow(0.5, std::abs(t)));
    DecayEstimate g = decay_rate(Sequence(1, -20, std::move(geo)));
    CHECK(g.decaying);
    CHECK(g.lambda == doctest::Approx(0.5).epsilon(1e-9));

    DecayEstimate d = decay_rate(bump());
    CHECK(d.decaying);
    CHECK(std::abs(d.lambda - hamlock::testing::cubic_decay_root()) <= 1e-4);

    CHECK_THROWS_AS(decay_rate(Sequence::delta(0, Eigen::VectorXd::Constant(1, 1.0))),
                    NumericsError);
}

TEST_CASE("gallery solutions decay geometrically") {
    for (auto params : {std::pair<std::string, std::vector<double>>{"scalar_power", {1.0, 4.0}},
                        {"periodic_scalar", {1.0, 2.0, 4.0}}}) {
        SystemModel m = builtin_model(params.first, params.second);
        OneBumpConfig cfg;
        cfg.window = 60;
        OneBumpResult res = find_one_bump(m, cfg);
        REQUIRE(res.report.converged);
        DecayEstimate d = decay_rate(res.report.solution);
        CHECK(d.decaying);
        CHECK(d.lambda > 0.0);
        CHECK(d.lambda < 1.0);
    }
}
