#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hamlock/common.hpp"

namespace hamlock {

/// A finitely supported map Z -> R^n. Values are stored on a contiguous
/// index range [first, last]; evaluation anywhere else returns the zero
/// vector exactly. The canonical zero element stores no sites at all.
///
/// Construction trims exact-zero sites from both ends, so two sequences
/// with equal values compare equal regardless of how much zero padding
/// they were built with.
class Sequence {
  public:
    explicit Sequence(int dim);
    Sequence(int dim, long base, std::vector<double> values);

    static Sequence zero(int dim) { return Sequence(dim); }
    /// Single-site sequence: x at index t, zero elsewhere.
    static Sequence delta(long t, const Eigen::VectorXd& x);

    int dim() const { return dim_; }
    bool is_zero() const { return data_.empty(); }
    long first() const { return base_; }
    long last() const { return base_ + site_count() - 1; }
    long site_count() const { return static_cast<long>(data_.size()) / dim_; }

    /// Value at index t (zero vector outside the stored range).
    Eigen::VectorXd value(long t) const;
    /// Forward difference u(t) - u(t-1).
    Eigen::VectorXd diff(long t) const { return value(t) - value(t - 1); }
    /// Euclidean norm of the site value at t.
    double site_norm(long t) const;

    /// Mutable view of a stored site; t must lie in [first, last].
    Eigen::Map<Eigen::VectorXd> site(long t);
    Eigen::Map<const Eigen::VectorXd> site(long t) const;

    double sup_norm() const;
    /// Index of the site with the largest Euclidean norm (lowest index on
    /// ties); 0 for the zero sequence.
    long peak_index() const;

    Sequence shifted(long p) const;
    Sequence scaled(double a) const;
    /// Drops sites with |u(t)| <= tol at both ends of the stored range.
    Sequence trimmed(double tol) const;

    Sequence& operator+=(const Sequence& other);
    Sequence& operator-=(const Sequence& other);
    /// this += a * other
    Sequence& axpy(double a, const Sequence& other);

    friend bool operator==(const Sequence& a, const Sequence& b);

  private:
    int dim_;
    long base_ = 0;
    std::vector<double> data_;  // site-major, site_count()*dim_ entries

    void normalize();
    void grow_to(long lo, long hi);
};

Sequence operator+(Sequence a, const Sequence& b);
Sequence operator-(Sequence a, const Sequence& b);
Sequence operator*(double a, Sequence u);

/// result(t) = u(t - p).
Sequence shift(const Sequence& u, long p);

/// u with all sites outside the window dropped.
Sequence restrict_to(const Sequence& u, const Window& w);

/// Sum over Z of <u(t), v(t)>; exact finite sum over the shared support.
double inner_l2(const Sequence& u, const Sequence& v);
inline double norm_l2(const Sequence& u) { return std::sqrt(inner_l2(u, u)); }

}  // namespace hamlock
