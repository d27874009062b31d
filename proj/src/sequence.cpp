#include "hamlock/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace hamlock {

Sequence::Sequence(int dim) : dim_(dim) {
    if (dim < 1) throw ConfigError("sequence dimension must be positive");
}

Sequence::Sequence(int dim, long base, std::vector<double> values)
    : dim_(dim), base_(base), data_(std::move(values)) {
    if (dim < 1) throw ConfigError("sequence dimension must be positive");
    if (data_.size() % dim_ != 0)
        throw ConfigError("sequence payload is not a whole number of sites");
    normalize();
}

Sequence Sequence::delta(long t, const Eigen::VectorXd& x) {
    Sequence u(static_cast<int>(x.size()), t,
               std::vector<double>(x.data(), x.data() + x.size()));
    return u;
}

void Sequence::normalize() {
    auto site_zero = [&](long i) {
        for (int j = 0; j < dim_; ++j)
            if (data_[i * dim_ + j] != 0.0) return false;
        return true;
    };
    long n = site_count();
    long lo = 0, hi = n - 1;
    while (lo <= hi && site_zero(lo)) ++lo;
    while (hi >= lo && site_zero(hi)) --hi;
    if (lo > hi) {
        data_.clear();
        base_ = 0;
        return;
    }
    if (lo > 0 || hi < n - 1) {
        std::vector<double> kept(data_.begin() + lo * dim_, data_.begin() + (hi + 1) * dim_);
        data_ = std::move(kept);
        base_ += lo;
    }
}

Eigen::VectorXd Sequence::value(long t) const {
    if (is_zero() || t < first() || t > last()) return Eigen::VectorXd::Zero(dim_);
    return site(t);
}

double Sequence::site_norm(long t) const {
    if (is_zero() || t < first() || t > last()) return 0.0;
    return site(t).norm();
}

Eigen::Map<Eigen::VectorXd> Sequence::site(long t) {
    return {data_.data() + (t - base_) * dim_, dim_};
}

Eigen::Map<const Eigen::VectorXd> Sequence::site(long t) const {
    return {data_.data() + (t - base_) * dim_, dim_};
}

double Sequence::sup_norm() const {
    double s = 0;
    for (long t = first(); !is_zero() && t <= last(); ++t) s = std::max(s, site_norm(t));
    return s;
}

long Sequence::peak_index() const {
    if (is_zero()) return 0;
    long best = first();
    double best_norm = -1;
    for (long t = first(); t <= last(); ++t) {
        double v = site_norm(t);
        if (v > best_norm) {
            best_norm = v;
            best = t;
        }
    }
    return best;
}

Sequence Sequence::shifted(long p) const {
    Sequence out = *this;
    out.base_ += p;
    return out;
}

Sequence Sequence::scaled(double a) const {
    if (a == 0.0) return Sequence(dim_);
    Sequence out = *this;
    for (double& x : out.data_) x *= a;
    return out;
}

Sequence Sequence::trimmed(double tol) const {
    if (is_zero()) return *this;
    long lo = first(), hi = last();
    while (lo <= hi && site_norm(lo) <= tol) ++lo;
    while (hi >= lo && site_norm(hi) <= tol) --hi;
    if (lo > hi) return Sequence(dim_);
    std::vector<double> kept(data_.begin() + (lo - base_) * dim_,
                             data_.begin() + (hi - base_ + 1) * dim_);
    return Sequence(dim_, lo, std::move(kept));
}

void Sequence::grow_to(long lo, long hi) {
    if (is_zero()) {
        base_ = lo;
        data_.assign((hi - lo + 1) * dim_, 0.0);
        return;
    }
    long cur_lo = first(), cur_hi = last();
    lo = std::min(lo, cur_lo);
    hi = std::max(hi, cur_hi);
    if (lo == cur_lo && hi == cur_hi) return;
    std::vector<double> grown((hi - lo + 1) * dim_, 0.0);
    std::copy(data_.begin(), data_.end(), grown.begin() + (cur_lo - lo) * dim_);
    data_ = std::move(grown);
    base_ = lo;
}

Sequence& Sequence::axpy(double a, const Sequence& other) {
    if (dim_ != other.dim_) throw ConfigError("sequence dimension mismatch");
    if (a == 0.0 || other.is_zero()) return *this;
    grow_to(other.first(), other.last());
    for (long t = other.first(); t <= other.last(); ++t)
        site(t) += a * other.site(t);
    normalize();
    return *this;
}

Sequence& Sequence::operator+=(const Sequence& other) { return axpy(1.0, other); }
Sequence& Sequence::operator-=(const Sequence& other) { return axpy(-1.0, other); }

bool operator==(const Sequence& a, const Sequence& b) {
    return a.dim_ == b.dim_ && a.base_ == b.base_ && a.data_ == b.data_;
}

Sequence operator+(Sequence a, const Sequence& b) { return a += b; }
Sequence operator-(Sequence a, const Sequence& b) { return a -= b; }
Sequence operator*(double a, Sequence u) { return u.scaled(a); }

Sequence shift(const Sequence& u, long p) { return u.shifted(p); }

Sequence restrict_to(const Sequence& u, const Window& w) {
    if (u.is_zero() || (u.first() >= w.lo && u.last() <= w.hi)) return u;
    long lo = std::max(u.first(), w.lo);
    long hi = std::min(u.last(), w.hi);
    if (lo > hi) return Sequence(u.dim());
    std::vector<double> vals;
    vals.reserve((hi - lo + 1) * u.dim());
    for (long t = lo; t <= hi; ++t) {
        auto x = u.site(t);
        for (int j = 0; j < u.dim(); ++j) vals.push_back(x[j]);
    }
    return Sequence(u.dim(), lo, std::move(vals));
}

double inner_l2(const Sequence& u, const Sequence& v) {
    if (u.dim() != v.dim()) throw ConfigError("sequence dimension mismatch");
    if (u.is_zero() || v.is_zero()) return 0.0;
    long lo = std::max(u.first(), v.first());
    long hi = std::min(u.last(), v.last());
    double s = 0;
    for (long t = lo; t <= hi; ++t) s += u.site(t).dot(v.site(t));
    return s;
}

}  // namespace hamlock
