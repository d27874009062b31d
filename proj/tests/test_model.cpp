#include <doctest.h>

#include <random>

#include "hamlock/model.hpp"

using namespace hamlock;

namespace {
Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }
}  // namespace

TEST_CASE("scalar cubic gallery model passes every assumption") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    CHECK(m.dim() == 1);
    CHECK(m.period() == 1);
    CHECK(m.alpha() == doctest::Approx(0.5));
    CHECK(m.beta() == 4.0);
    CHECK(m.witness().t0 == 0);
    CHECK(m.witness().x0[0] == 2.0);

    AssumptionReport rep = check_assumptions(m, SampleGrid::standard());
    CHECK(rep.all_pass);
    // witness margin: V(0,2) - <2, 2>/2 = 4 - 2 = 2
    const AssumptionCheck* a5 = rep.find("A5_witness");
    REQUIRE(a5 != nullptr);
    CHECK(a5->margin == doctest::Approx(2.0));
    // A4 slack is alpha x^2 exactly (beta V - <Vx,x> = 0 for pure powers)
    const AssumptionCheck* a4 = rep.find("A4_superquadratic");
    REQUIRE(a4 != nullptr);
    CHECK(a4->pass);
    CHECK(a4->margin >= 0.0);
}

TEST_CASE("beta at or below 2 is rejected at construction") {
    CHECK_THROWS_AS(builtin_model("scalar_power", {1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(builtin_model("scalar_power", {1.0, 1.5}), ConfigError);
    CHECK_THROWS_AS(builtin_model("periodic_scalar", {1.0, 2.0, 1.5}), ConfigError);
}

TEST_CASE("gallery lookups and errors") {
    SystemModel p = builtin_model("periodic_scalar", {1.0, 2.0, 4.0});
    CHECK(p.period() == 2);
    CHECK(p.L(3)(0, 0) == 2.0);
    CHECK(p.L(-1)(0, 0) == 2.0);
    CHECK(p.L(4)(0, 0) == 1.0);
    CHECK_THROWS_AS(builtin_model("no_such_model", {}), ConfigError);
    CHECK_THROWS_AS(builtin_model("scalar_power", {-1.0, 4.0}), ConfigError);
}

TEST_CASE("hessian: analytic values and the finite-difference fallback") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    CHECK(m.hessian(0, vec1(2.0))(0, 0) == doctest::Approx(12.0));  // 3 x^2
    CHECK(m.hessian(0, vec1(0.0)).norm() <= 1e-4);

    SystemModel cp = builtin_model("coupled_pair", {1.0, 2.0});
    CHECK(cp.hessian(0, Eigen::VectorXd::Zero(2)).norm() <= 1e-4);

    // same potential, no analytic Hessian: the fallback must match the
    // hand-coded |x|^2 I + 2 x x^T
    auto V = [](int, const Eigen::VectorXd& x) {
        double r2 = x.squaredNorm();
        return 0.25 * r2 * r2;
    };
    auto Vx = [](int, const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return x.squaredNorm() * x;
    };
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    Eigen::VectorXd w0(2);
    w0 << 2.0, 0.0;
    SystemModel fd(2, 1, {D}, V, Vx, std::nullopt, 0.5, 4.0, Witness{0, w0});
    CHECK(!fd.has_hessian());

    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x(2);
        x << gauss(rng), gauss(rng);
        Eigen::MatrixXd exact = x.squaredNorm() * Eigen::MatrixXd::Identity(2, 2) +
                                2.0 * x * x.transpose();
        Eigen::MatrixXd approx = fd.hessian(0, x);
        CHECK((exact - approx).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("assumption audit rejects unusable grids and inconsistent gradients") {
    SystemModel m = builtin_model("scalar_power", {1.0, 4.0});
    SampleGrid empty;
    CHECK_THROWS_AS(check_assumptions(m, empty), ConfigError);

    SampleGrid coarse = SampleGrid::standard();
    coarse.radii = {1.0, 0.5};  // no small radii
    CHECK_THROWS_AS(check_assumptions(m, coarse), ConfigError);

    // Vx deliberately inconsistent with V
    auto V = [](int, const Eigen::VectorXd& x) {
        double r2 = x.squaredNorm();
        return 0.25 * r2 * r2;
    };
    auto bad_Vx = [](int, const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return 2.0 * x.squaredNorm() * x;
    };
    SystemModel bad(1, 1, {Eigen::MatrixXd::Identity(1, 1)}, V, bad_Vx, std::nullopt, 0.5,
                    4.0, Witness{0, vec1(2.0)});
    CHECK_THROWS_AS(check_assumptions(bad, SampleGrid::standard()), ConfigError);
}

TEST_CASE("growth inequality margin is audited on the s-grid") {
    for (const char* name : {"scalar_power", "coupled_pair", "periodic_scalar"}) {
        SystemModel m = name == std::string("scalar_power")
                            ? builtin_model(name, {1.0, 4.0})
                            : name == std::string("coupled_pair")
                                  ? builtin_model(name, {1.0, 2.0})
                                  : builtin_model(name, {1.0, 2.0, 4.0});
        AssumptionReport rep = check_assumptions(m, SampleGrid::standard());
        const AssumptionCheck* g = rep.find("growth_inequality");
        REQUIRE(g != nullptr);
        CHECK(g->pass);
        CHECK(g->margin >= -1e-10);
    }
}

TEST_CASE("periodicity is exact by construction") {
    SystemModel m = builtin_model("periodic_scalar", {1.0, 2.0, 4.0});
    for (long t = -4; t <= 4; ++t) {
        CHECK((m.L(t) - m.L(t + 2)).norm() == 0.0);
        CHECK(m.V(t, vec1(0.7)) == m.V(t + 2, vec1(0.7)));
    }
}
