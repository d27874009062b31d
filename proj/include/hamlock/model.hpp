#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hamlock/common.hpp"

namespace hamlock {

/// A point (t0, x0) certifying that the potential beats the quadratic
/// confinement somewhere: V(t0,x0) - <x0, L(t0) x0>/2 > 0.
struct Witness {
    long t0 = 0;
    Eigen::VectorXd x0;
};

/// The system (L, V): T-periodic positive definite matrices L(t) and a
/// T-periodic superquadratic potential V(t, x) with gradient Vx and an
/// optional analytic Hessian. alpha and beta are the superquadraticity
/// constants (beta > 2, 0 < alpha < beta/2 - 1).
class SystemModel {
  public:
    using Potential = std::function<double(int tmod, const Eigen::VectorXd&)>;
    using Gradient = std::function<Eigen::VectorXd(int tmod, const Eigen::VectorXd&)>;
    using Hessian = std::function<Eigen::MatrixXd(int tmod, const Eigen::VectorXd&)>;

    SystemModel(int dim, int period, std::vector<Eigen::MatrixXd> L,
                Potential V, Gradient Vx, std::optional<Hessian> Vxx,
                double alpha, double beta, Witness witness,
                std::string name = "custom");

    int dim() const { return dim_; }
    int period() const { return period_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const Witness& witness() const { return witness_; }
    const std::string& name() const { return name_; }
    bool has_hessian() const { return Vxx_.has_value(); }

    const Eigen::MatrixXd& L(long t) const { return L_[mod(t)]; }
    double V(long t, const Eigen::VectorXd& x) const { return V_(mod(t), x); }
    Eigen::VectorXd Vx(long t, const Eigen::VectorXd& x) const { return Vx_(mod(t), x); }
    /// Analytic Hessian when supplied, otherwise symmetric central
    /// differences of Vx with step 1e-6 * max(1, |x|).
    Eigen::MatrixXd hessian(long t, const Eigen::VectorXd& x) const;

    /// Smallest eigenvalue of any L(t) (> 0 by construction).
    double min_L_eigenvalue() const { return l_min_; }
    double max_L_eigenvalue() const { return l_max_; }
    /// L1 with L1^-1 ||u||_* <= ||u||_2 <= L1 ||u||_*, from the L spectrum
    /// and ||du||_2 <= 2 ||u||_2.
    double norm_equivalence_constant() const;

  private:
    int mod(long t) const {
        long r = t % period_;
        return static_cast<int>(r < 0 ? r + period_ : r);
    }

    int dim_;
    int period_;
    std::vector<Eigen::MatrixXd> L_;
    Potential V_;
    Gradient Vx_;
    std::optional<Hessian> Vxx_;
    double alpha_;
    double beta_;
    Witness witness_;
    std::string name_;
    double l_min_ = 0;
    double l_max_ = 0;
};

/// Model gallery:
///   scalar_power(c, beta):       n=1, T=1, L = c,          V = |x|^beta / beta
///   coupled_pair(c1, c2):        n=2, T=1, L = diag(c1,c2), V = |x|^4 / 4
///   periodic_scalar(c0, c1, beta): n=1, T=2, L(0)=c0, L(1)=c1, V = |x|^beta / beta
SystemModel builtin_model(const std::string& name, const std::vector<double>& params);

/// Sampling grid for the assumption audit: per-period time indices are
/// always covered; x ranges over directions x radii (radii must reach
/// down to 1e-4 or below); s_values in [1, 10] drive the growth check.
struct SampleGrid {
    std::vector<double> radii;
    int directions = 8;
    std::vector<double> s_values;
    unsigned seed = 0;

    static SampleGrid standard(unsigned seed = 0);
};

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    double margin = 0;    // worst-case slack; negative means violated
    std::string detail;   // violating sample point when failed
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_pass = false;
    std::string grid_description;

    const AssumptionCheck* find(const std::string& name) const;
};

/// Numerically audits periodicity, positive definiteness of L, the
/// small-x behavior of Vx, superquadraticity (with its induced growth
/// inequality on s in [1,10]) and the witness sign. Throws ConfigError
/// if the grid is unusable or Vx is inconsistent with V (central
/// differences, relative tolerance 1e-4).
AssumptionReport check_assumptions(const SystemModel& m, const SampleGrid& grid);

}  // namespace hamlock
