#include "hamlock/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace hamlock {

SystemModel::SystemModel(int dim, int period, std::vector<Eigen::MatrixXd> L,
                         Potential V, Gradient Vx, std::optional<Hessian> Vxx,
                         double alpha, double beta, Witness witness, std::string name)
    : dim_(dim),
      period_(period),
      L_(std::move(L)),
      V_(std::move(V)),
      Vx_(std::move(Vx)),
      Vxx_(std::move(Vxx)),
      alpha_(alpha),
      beta_(beta),
      witness_(std::move(witness)),
      name_(std::move(name)) {
    if (dim_ < 1) throw ConfigError("model dimension must be positive");
    if (period_ < 1) throw ConfigError("model period must be positive");
    if (static_cast<int>(L_.size()) != period_)
        throw ConfigError("model needs one L matrix per period index");
    if (!(beta_ > 2.0)) throw ConfigError("beta must exceed 2");
    if (!(alpha_ > 0.0 && alpha_ < beta_ / 2.0 - 1.0))
        throw ConfigError("alpha must lie in (0, beta/2 - 1)");
    if (witness_.x0.size() != dim_) throw ConfigError("witness dimension mismatch");

    l_min_ = std::numeric_limits<double>::infinity();
    l_max_ = 0;
    for (const auto& M : L_) {
        if (M.rows() != dim_ || M.cols() != dim_)
            throw ConfigError("L matrix has wrong shape");
        if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + M.cwiseAbs().maxCoeff()))
            throw ConfigError("L matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        double lo = es.eigenvalues().minCoeff();
        double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0)) throw ConfigError("L matrix is not positive definite");
        l_min_ = std::min(l_min_, lo);
        l_max_ = std::max(l_max_, hi);
    }
}

Eigen::MatrixXd SystemModel::hessian(long t, const Eigen::VectorXd& x) const {
    if (Vxx_) return (*Vxx_)(mod(t), x);
    double h = 1e-6 * std::max(1.0, x.norm());
    Eigen::MatrixXd H(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        H.col(j) = (Vx(t, xp) - Vx(t, xm)) / (2 * h);
    }
    return 0.5 * (H + H.transpose());
}

double SystemModel::norm_equivalence_constant() const {
    // ||u||_*^2 <= (4 + lmax) ||u||_2^2 and ||u||_*^2 >= lmin ||u||_2^2.
    return std::max(std::sqrt(4.0 + l_max_), 1.0 / std::sqrt(l_min_));
}

namespace {

// Smallest positive integer amplitude m with V(t0, m e1) - <m e1, L m e1>/2 > 0.
Eigen::VectorXd default_witness_x0(int dim, double c, double beta) {
    for (int m = 1; m <= 1 << 20; ++m) {
        double lhs = std::pow(static_cast<double>(m), beta) / beta;
        double rhs = 0.5 * c * m * m;
        if (lhs > rhs) {
            Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
            x0[0] = m;
            return x0;
        }
    }
    throw ConfigError("could not locate a witness amplitude");
}

SystemModel power_model(int dim, int period, std::vector<Eigen::MatrixXd> L, double beta,
                        const std::string& name) {
    SystemModel::Potential V;
    SystemModel::Gradient Vx;
    if (beta == 4.0) {
        // |x|^4/4 and |x|^2 x without the libm pow in the hot loops
        V = [](int, const Eigen::VectorXd& x) {
            double r2 = x.squaredNorm();
            return 0.25 * r2 * r2;
        };
        Vx = [](int, const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return x.squaredNorm() * x;
        };
    } else {
        V = [beta](int, const Eigen::VectorXd& x) {
            return std::pow(x.norm(), beta) / beta;
        };
        Vx = [beta](int, const Eigen::VectorXd& x) -> Eigen::VectorXd {
            double r = x.norm();
            if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
            return std::pow(r, beta - 2.0) * x;
        };
    }
    std::optional<SystemModel::Hessian> Vxx;
    if (beta >= 4.0) {
        // |x|^(b-2) I + (b-2) |x|^(b-4) x x^T, smooth at 0 for b >= 4
        Vxx = [beta, dim](int, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            double r = x.norm();
            if (r == 0.0) return Eigen::MatrixXd::Zero(dim, dim);
            return std::pow(r, beta - 2.0) * Eigen::MatrixXd::Identity(dim, dim) +
                   (beta - 2.0) * std::pow(r, beta - 4.0) * x * x.transpose();
        };
    }
    double alpha = 0.5 * (beta / 2.0 - 1.0);
    // Witness at the period index with the weakest confinement.
    long t0 = 0;
    double c0 = std::numeric_limits<double>::infinity();
    for (int t = 0; t < period; ++t) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L[t]);
        if (es.eigenvalues().minCoeff() < c0) {
            c0 = es.eigenvalues().minCoeff();
            t0 = t;
        }
    }
    // Confinement along e1 at t0 decides the integer amplitude.
    double c_e1 = L[t0](0, 0);
    Witness w{t0, default_witness_x0(dim, c_e1, beta)};
    return SystemModel(dim, period, std::move(L), V, Vx, Vxx, alpha, beta, std::move(w), name);
}

}  // namespace

SystemModel builtin_model(const std::string& name, const std::vector<double>& params) {
    if (name == "scalar_power") {
        if (params.size() != 2) throw ConfigError("scalar_power expects params [c, beta]");
        double c = params[0], beta = params[1];
        if (!(c > 0)) throw ConfigError("scalar_power: c must be positive");
        std::vector<Eigen::MatrixXd> L{Eigen::MatrixXd::Constant(1, 1, c)};
        return power_model(1, 1, std::move(L), beta, name);
    }
    if (name == "coupled_pair") {
        if (params.size() != 2) throw ConfigError("coupled_pair expects params [c1, c2]");
        if (!(params[0] > 0 && params[1] > 0))
            throw ConfigError("coupled_pair: c1, c2 must be positive");
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
        D(0, 0) = params[0];
        D(1, 1) = params[1];
        return power_model(2, 1, {D}, 4.0, name);
    }
    if (name == "periodic_scalar") {
        if (params.size() != 3)
            throw ConfigError("periodic_scalar expects params [c0, c1, beta]");
        if (!(params[0] > 0 && params[1] > 0))
            throw ConfigError("periodic_scalar: c0, c1 must be positive");
        std::vector<Eigen::MatrixXd> L{Eigen::MatrixXd::Constant(1, 1, params[0]),
                                       Eigen::MatrixXd::Constant(1, 1, params[1])};
        return power_model(1, 2, std::move(L), params[2], name);
    }
    throw ConfigError("unknown builtin model: " + name);
}

SampleGrid SampleGrid::standard(unsigned seed) {
    SampleGrid g;
    g.radii = {10.0, 3.0, 1.0, 0.3, 0.1, 1e-2, 1e-3, 1e-4, 3e-5, 1e-5};
    g.directions = 16;
    g.s_values = {1.0, 1.5, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0};
    g.seed = seed;
    return g;
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

std::vector<Eigen::VectorXd> sample_directions(int dim, int count, unsigned seed) {
    std::vector<Eigen::VectorXd> dirs;
    if (dim == 1) {
        dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
        dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
        return dirs;
    }
    for (int j = 0; j < dim; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e[j] = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    std::mt19937_64 rng(seed + 0x9e3779b9u);
    std::normal_distribution<double> gauss;
    while (static_cast<int>(dirs.size()) < count) {
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; ++j) v[j] = gauss(rng);
        double n = v.norm();
        if (n > 1e-12) dirs.push_back(v / n);
    }
    return dirs;
}

std::string point_string(long t, const Eigen::VectorXd& x) {
    std::ostringstream os;
    os << "t=" << t << ", x=[";
    for (int j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
    os << "]";
    return os.str();
}

}  // namespace

AssumptionReport check_assumptions(const SystemModel& m, const SampleGrid& grid) {
    if (grid.radii.empty()) throw ConfigError("assumption grid has no radii");
    double min_radius = *std::min_element(grid.radii.begin(), grid.radii.end());
    if (min_radius > 1e-4)
        throw ConfigError("assumption grid must include radii at or below 1e-4");

    auto dirs = sample_directions(m.dim(), grid.directions, grid.seed);
    std::vector<double> radii = grid.radii;
    std::sort(radii.begin(), radii.end(), std::greater<>());  // large -> small

    AssumptionReport rep;
    std::ostringstream gd;
    gd << "t in {0..." << m.period() - 1 << "}, " << dirs.size() << " directions, "
       << radii.size() << " radii in [" << radii.back() << ", " << radii.front() << "], "
       << grid.s_values.size() << " growth factors";
    rep.grid_description = gd.str();

    // A1: periodicity is structural (lookups key on t mod T); verify a lap.
    {
        AssumptionCheck c{"A1_periodicity", true, 0, "exact by construction (t mod T)"};
        for (int t = 0; t < m.period() && c.pass; ++t) {
            if ((m.L(t) - m.L(t + m.period())).cwiseAbs().maxCoeff() != 0.0) {
                c.pass = false;
                c.detail = "L(t) != L(t+T) at t=" + std::to_string(t);
            }
            Eigen::VectorXd x = Eigen::VectorXd::Constant(m.dim(), 0.7);
            if (m.V(t, x) != m.V(t + m.period(), x)) {
                c.pass = false;
                c.detail = "V(t,.) != V(t+T,.) at t=" + std::to_string(t);
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // A2: symmetric positive definite L(t).
    {
        AssumptionCheck c{"A2_L_positive_definite", true, m.min_L_eigenvalue(), ""};
        c.pass = m.min_L_eigenvalue() > 0;
        c.detail = "min eigenvalue over one period";
        rep.checks.push_back(std::move(c));
    }

    // Gradient consistency gate: Vx against central differences of V.
    for (int t = 0; t < m.period(); ++t) {
        for (const auto& d : dirs) {
            for (double r : {1.0, 0.3, 3.0}) {
                Eigen::VectorXd x = r * d;
                double h = 1e-6 * std::max(1.0, x.norm());
                Eigen::VectorXd g = m.Vx(t, x);
                for (int j = 0; j < m.dim(); ++j) {
                    Eigen::VectorXd xp = x, xm = x;
                    xp[j] += h;
                    xm[j] -= h;
                    double fd = (m.V(t, xp) - m.V(t, xm)) / (2 * h);
                    if (std::abs(fd - g[j]) > 1e-4 * (1.0 + std::abs(g[j])))
                        throw ConfigError("Vx inconsistent with V at " + point_string(t, x));
                }
            }
        }
    }

    // A3: V(t,0) = 0 and |Vx(t,x)|/|x| -> 0 monitored over shrinking radii.
    {
        AssumptionCheck c{"A3_small_x", true, 0, ""};
        for (int t = 0; t < m.period(); ++t) {
            double v0 = std::abs(m.V(t, Eigen::VectorXd::Zero(m.dim())));
            if (v0 > 1e-14) {
                c.pass = false;
                c.detail = "V(t,0) != 0 at t=" + std::to_string(t);
            }
        }
        double worst_final = 0;
        for (int t = 0; t < m.period() && c.pass; ++t) {
            for (const auto& d : dirs) {
                // ratio per radius, large to small; the last three must decrease
                std::vector<double> ratio;
                for (double r : radii) ratio.push_back(m.Vx(t, r * d).norm() / r);
                size_t n = ratio.size();
                bool tail_ok = ratio[n - 1] <= 0.01 && ratio[n - 1] <= ratio[n - 2] &&
                               ratio[n - 2] <= ratio[n - 3];
                worst_final = std::max(worst_final, ratio[n - 1]);
                if (!tail_ok) {
                    c.pass = false;
                    c.detail = "|Vx|/|x| not vanishing along " + point_string(t, d);
                    break;
                }
            }
        }
        if (c.pass) c.margin = 0.01 - worst_final;
        rep.checks.push_back(std::move(c));
    }

    // A4: beta V - <Vx, x> <= alpha <x, L x> pointwise.
    {
        AssumptionCheck c{"A4_superquadratic", true, std::numeric_limits<double>::infinity(), ""};
        for (int t = 0; t < m.period(); ++t) {
            for (const auto& d : dirs) {
                for (double r : radii) {
                    Eigen::VectorXd x = r * d;
                    double lhs = m.beta() * m.V(t, x) - m.Vx(t, x).dot(x);
                    double rhs = m.alpha() * x.dot(m.L(t) * x);
                    double slack = rhs - lhs;
                    if (slack < c.margin) {
                        c.margin = slack;
                        c.detail = point_string(t, x);
                    }
                }
            }
        }
        c.pass = c.margin >= -1e-12;
        rep.checks.push_back(std::move(c));
    }

    // Induced growth inequality on s in [1, 10].
    {
        AssumptionCheck c{"growth_inequality", true, std::numeric_limits<double>::infinity(), ""};
        double q = m.alpha() / (m.beta() - 2.0);
        for (int t = 0; t < m.period(); ++t) {
            for (const auto& d : dirs) {
                for (double r : radii) {
                    Eigen::VectorXd x = r * d;
                    double xLx = x.dot(m.L(t) * x);
                    double vx = m.V(t, x);
                    for (double s : grid.s_values) {
                        double lhs = m.V(t, s * x);
                        double rhs = (vx - q * xLx) * std::pow(s, m.beta()) + q * s * s * xLx;
                        double slack = lhs - rhs;
                        if (slack < c.margin) {
                            c.margin = slack;
                            c.detail = point_string(t, x) + ", s=" + std::to_string(s);
                        }
                    }
                }
            }
        }
        c.pass = c.margin >= -1e-10;
        rep.checks.push_back(std::move(c));
    }

    // A5: witness sign.
    {
        const Witness& w = m.witness();
        double margin = m.V(w.t0, w.x0) - 0.5 * w.x0.dot(m.L(w.t0) * w.x0);
        AssumptionCheck c{"A5_witness", margin > 0, margin, point_string(w.t0, w.x0)};
        rep.checks.push_back(std::move(c));
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

}  // namespace hamlock
