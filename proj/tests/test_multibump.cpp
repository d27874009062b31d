#include <doctest.h>

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
}  // namespace

TEST_CASE("separation vectors enforce the gap bound and divisibility") {
    Window bound = Window::symmetric(400);
    SeparationVector P = make_separation(2, 4, 1, 48, bound);
    CHECK(P.k() == 2);
    CHECK(P.points[1] - P.points[0] == 48);
    CHECK_THROWS_AS(make_separation(2, 4, 1, 47, bound), ConfigError);
    SeparationVector P3 = make_separation(3, 4, 2, 48, bound);
    for (long p : P3.points) CHECK(p % 2 == 0);
    CHECK_THROWS_AS(make_separation(3, 4, 2, 49, bound), ConfigError);
    // train too wide for the window
    CHECK_THROWS_AS(make_separation(9, 4, 1, 120, bound), ConfigError);
}

TEST_CASE("window systems follow the midpoint and gap-pad formulas") {
    Window bound{-200, 200};
    SeparationVector P = SeparationVector::make({0, 100}, 4, 1);
    WindowSystem ws = windows(P, bound);
    REQUIRE(ws.I.size() == 2);
    REQUIRE(ws.M.size() == 3);
    CHECK(ws.I[0] == IndexSet::range(-200, 50));
    CHECK(ws.I[1] == IndexSet::range(51, 200));
    CHECK(ws.M[0] == IndexSet::range(-200, -20));
    CHECK(ws.M[1] == IndexSet::range(21, 80));
    CHECK(ws.M[2] == IndexSet::range(121, 200));

    // I windows partition the bounding window
    IndexSet all = ws.I[0].unite(ws.I[1]);
    CHECK(all == IndexSet::window(bound));
    CHECK(ws.I[0].intersect(ws.I[1]).empty());
}

TEST_CASE("gluing one bump is a plain shift") {
    Window bound = Window::symmetric(400);
    SeparationVector P = SeparationVector::make({48}, 4, 1);
    CHECK(glue(bump(), P, bound) == shift(bump(), 48));
}

TEST_CASE("glued trains satisfy the translate-additivity asymptotics") {
    Window bound = Window::symmetric(400);
    const Sequence& v = bump();
    double nv2 = inner_star(v, v, cubic());
    double fv = action(v, cubic());

    SeparationVector P40 = SeparationVector::make({-20, 20}, 1, 1);
    Sequence g40 = glue(v, P40, bound);
    CHECK(std::abs(inner_star(g40, g40, cubic()) - 2 * nv2) <= 1e-8);

    SeparationVector P48 = make_separation(2, 4, 1, 48, bound);
    Sequence g48 = glue(v, P48, bound);
    CHECK(std::abs(action(g48, cubic()) - 2 * fv) <= 1e-6);

    // the defect shrinks like the model decay rate: fitted, not assumed
    double lam = hamlock::testing::cubic_decay_root();
    double prev = -1;
    for (long s : {12, 16, 20, 24}) {
        SeparationVector P = SeparationVector::make({0, s}, 1, 1);
        Sequence g = glue(v, P, bound);
        double err = std::abs(inner_star(g, g, cubic()) - 2 * nv2);
        if (prev > 0) {
            double drop = err / prev;  // expect ~ lam^4 per 4 extra sites
            CHECK(drop < std::pow(lam, 4) * 5);
            CHECK(drop > std::pow(lam, 4) / 5);
        }
        prev = err;
    }
}

TEST_CASE("glue reports window overflow") {
    Window small = Window::symmetric(60);
    SeparationVector P = SeparationVector::make({0, 48}, 1, 1);
    CHECK_THROWS_AS(glue(bump(), P, small), NumericsError);
}

TEST_CASE("k = 1 multibump recovers the bump and passes every clause") {
    MultibumpConfig cfg;
    cfg.window = 400;
    SeparationVector P = SeparationVector::make({0}, 4, 1);
    MultibumpReport rep = find_multibump(bump(), P, cubic(), 0.1, cfg);
    CHECK(rep.pass);
    CHECK(rep.newton_converged);
    CHECK(rep.per_window_distance[0] <= 1e-8);
    CHECK(std::abs(rep.per_window_action[0] - rep.one_bump_action) <= 1e-10);
}

TEST_CASE("two- and three-bump verification passes at spacing 48") {
    for (int k : {2, 3}) {
        MultibumpConfig cfg;
        cfg.window = k == 3 ? 600 : 400;
        SeparationVector P =
            make_separation(k, 4, 1, 48, Window::symmetric(cfg.window));
        MultibumpReport rep = find_multibump(bump(), P, cubic(), 0.1, cfg);
        REQUIRE(rep.newton_converged);
        CHECK(rep.pass);
        CHECK(rep.residual_sup <= 1e-10);
        for (double d : rep.per_window_distance) CHECK(d <= 0.01);
        for (double e : rep.tail_energies) CHECK(e <= 1e-10 * inner_star(bump(), bump(), cubic()));
        for (double a : rep.per_window_action)
            CHECK(std::abs(a - rep.one_bump_action) <= 1e-6);
        // level additivity of the full action
        CHECK(std::abs(rep.action_value - k * rep.one_bump_action) <= 10 * 1e-6);
    }
}

TEST_CASE("under-separated trains are surfaced as failed clauses") {
    // spacing 12 declared with N = 1 to get past validation
    SeparationVector P = SeparationVector::make({-6, 6}, 1, 1);
    MultibumpConfig cfg;
    cfg.window = 400;
    MultibumpReport rep = find_multibump(bump(), P, cubic(), 0.1, cfg);
    CHECK(!rep.pass);
    CHECK(!rep.failed_clauses.empty());
}

TEST_CASE("localization tightens monotonically with the spacing") {
    double prev = 1e30;
    for (long s : {48, 96, 192}) {
        MultibumpConfig cfg;
        cfg.window = 800;
        SeparationVector P = make_separation(2, 4, 1, s, Window::symmetric(800));
        MultibumpReport rep = find_multibump(bump(), P, cubic(), 0.1, cfg);
        REQUIRE(rep.pass);
        double d = *std::max_element(rep.per_window_distance.begin(),
                                     rep.per_window_distance.end());
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("glue_path samples the path and respects support separation") {
    Path gamma = initial_path(cubic(), 9);
    Window bound = Window::symmetric(400);
    SeparationVector P = make_separation(2, 4, 1, 48, bound);

    // theta = 0 everywhere: the zero sequence
    CHECK(glue_path(gamma, P, {0.0, 0.0}, bound).is_zero());

    // interior theta: per-window action equals the path action (supports
    // are single sites here, trivially separated)
    int j = gamma.argmax_node();
    double theta_j = static_cast<double>(j) / (gamma.nodes.size() - 1);
    Sequence G = glue_path(gamma, P, {theta_j, theta_j}, bound);
    WindowSystem ws = windows(P, bound);
    for (int i = 0; i < 2; ++i)
        CHECK(window_action(G, ws.I[i], cubic()) ==
              doctest::Approx(gamma.levels[j]).epsilon(1e-12));

    // boundary face: window action collapses to the endpoint action
    Sequence Gb = glue_path(gamma, P, {theta_j, 1.0}, bound);
    CHECK(window_action(Gb, ws.I[1], cubic()) ==
          doctest::Approx(gamma.levels.back()).epsilon(1e-12));

    // overlapping translated supports are an error: wide nodes, tiny gaps
    Path wide;
    wide.nodes = {Sequence::zero(1), bump(), negative_endpoint(cubic())};
    wide.levels = {0.0, action(bump(), cubic()), action(negative_endpoint(cubic()), cubic())};
    SeparationVector tight = SeparationVector::make({-6, 6}, 1, 1);
    CHECK_THROWS_AS(glue_path(wide, tight, {0.5, 0.5}, bound), NumericsError);
}
