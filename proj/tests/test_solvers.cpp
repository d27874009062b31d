#include <doctest.h>

#include <random>

#include "hamlock/mountainpass.hpp"
#include "support/oracles.hpp"

using namespace hamlock;
using hamlock::testing::cubic_decay_root;
using hamlock::testing::random_sequence;
using hamlock::testing::shooting_bump_oracle;

namespace {

const SystemModel& cubic() {
    static SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    return m;
}

Sequence converged_bump() {
    static Sequence v = [] {
        OneBumpConfig cfg;
        cfg.window = 80;
        OneBumpResult res = find_one_bump(cubic(), cfg);
        REQUIRE(res.report.converged);
        return res.report.solution;
    }();
    return v;
}

}  // namespace

TEST_CASE("descent from the zero critical point stays put") {
    OperatorA A(cubic(), Window::symmetric(20));
    FlowTrajectory traj = descend(Sequence::zero(1), cubic(), A, 10);
    CHECK(traj.reached_tolerance);
    for (double f : traj.actions) CHECK(f == 0.0);
}

TEST_CASE("descent from inside the well converges with decreasing gradients") {
    Sequence v = converged_bump();
    OperatorA A(cubic(), Window::symmetric(80));
    DescentControl ctrl;
    ctrl.tol = 1e-12;
    FlowTrajectory traj = descend(v.scaled(0.8), cubic(), A, 200, ctrl);
    // the radial dynamics contract cubically, so the run is short
    REQUIRE(traj.actions.size() >= 4);
    CHECK(traj.reached_tolerance);
    CHECK(traj.actions.back() >= 0.0);
    // strictly decreasing gradient norms after burn-in
    size_t burn = traj.grad_norms.size() / 3;
    for (size_t i = burn; i + 1 < traj.grad_norms.size(); ++i)
        CHECK(traj.grad_norms[i + 1] < traj.grad_norms[i]);
}

TEST_CASE("descent past the fold runs downhill monotonically until it stalls") {
    // 1.2 v sits beyond the mountain ridge: the flow is an honest descent
    // (actions never increase) even though the action dives without bound.
    Sequence v = converged_bump();
    OperatorA A(cubic(), Window::symmetric(80));
    FlowTrajectory traj = descend(v.scaled(1.2), cubic(), A, 200);
    for (size_t i = 0; i + 1 < traj.actions.size(); ++i)
        CHECK(traj.actions[i + 1] <= traj.actions[i] + 1e-12);
}

TEST_CASE("descent actions are non-increasing from any start in the gallery") {
    std::mt19937_64 rng(67);
    for (const auto& m : {builtin_model("scalar_power", {1.0, 4.0}),
                          builtin_model("periodic_scalar", {1.0, 2.0, 4.0})}) {
        OperatorA A(m, Window::symmetric(30));
        for (int i = 0; i < 5; ++i) {
            Sequence u0 = random_sequence(rng, 1, -20, 20, 0.4);
            FlowTrajectory traj = descend(u0, m, A, 40);
            for (size_t k = 0; k + 1 < traj.actions.size(); ++k)
                CHECK(traj.actions[k + 1] <= traj.actions[k] + 1e-12);
        }
    }
}

TEST_CASE("newton refine is a fixed point on a solution") {
    Sequence v = converged_bump();
    SolveReport rep = newton_refine(v, cubic(), Window::symmetric(80));
    CHECK(rep.converged);
    CHECK(rep.iterations <= 1);
    CHECK(rep.residual_sup <= 1e-12);
}

TEST_CASE("newton from zero converges to the zero orbit and flags it") {
    SolveReport rep = newton_refine(Sequence::zero(1), cubic(), Window::symmetric(40));
    CHECK(rep.converged);
    CHECK(rep.zero_solution);
    CHECK(norm_star(rep.solution, cubic()) <= 1e-12);
}

TEST_CASE("newton from a sech-like seed lands on the bump with the right tail") {
    double lam = cubic_decay_root();
    std::vector<double> vals;
    for (long t = -12; t <= 12; ++t) vals.push_back(1.4 * std::pow(lam, std::abs(t)));
    Sequence seed(1, -12, std::move(vals));
    SolveReport rep = newton_refine(seed, cubic(), Window::symmetric(80));
    REQUIRE(rep.converged);
    CHECK(rep.residual_sup <= 1e-10);
    CHECK(!rep.zero_solution);
    const Sequence& v = rep.solution;
    for (long t = 5; t <= 15; ++t) {
        double ratio = v.value(t + 1)[0] / v.value(t)[0];
        CHECK(std::abs(ratio - lam) <= 1e-2);
    }
    CHECK(std::abs(v.value(16)[0] / v.value(15)[0] - lam) <= 1e-4);
}

TEST_CASE("newton tail is quadratic") {
    double lam = cubic_decay_root();
    std::vector<double> vals;
    for (long t = -10; t <= 10; ++t) vals.push_back(1.2 * std::pow(lam, std::abs(t)));
    NewtonOptions opts;
    opts.tol_res = 1e-13;
    SolveReport rep = newton_refine(Sequence(1, -10, std::move(vals)), cubic(),
                                    Window::symmetric(60), opts);
    REQUIRE(rep.converged);
    const auto& h = rep.residual_history;
    REQUIRE(h.size() >= 4);
    // r_{k+1} <= C r_k^2 over the last three drops with a modest constant
    for (size_t i = h.size() - 3; i < h.size(); ++i) {
        double c = h[i] / (h[i - 1] * h[i - 1]);
        CHECK(c < 1e3);
    }
}

TEST_CASE("nonzero-seeded collapse to zero is reported, not hidden") {
    // a tiny seed rolls into the zero orbit; the report must say so
    Sequence seed = Sequence::delta(0, Eigen::VectorXd::Constant(1, 1e-4));
    SolveReport rep = newton_refine(seed, cubic(), Window::symmetric(40));
    CHECK(rep.converged);
    CHECK(rep.zero_solution);
}

TEST_CASE("solution residual is small against the independent shooting orbit") {
    Sequence w = shooting_bump_oracle();
    // the oracle orbit itself nearly solves the lattice equation
    Sequence r = residual(w, cubic());
    CHECK(r.sup_norm() <= 1e-10);
}
