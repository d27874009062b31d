#include "hamlock/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hamlock {

double MassProfile::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

MassProfile MassProfile::from_sequence(const Sequence& u) {
    MassProfile p;
    if (u.is_zero()) throw ConfigError("cannot build a mass profile from the zero sequence");
    double total = inner_l2(u, u);
    p.base = u.first();
    p.values.reserve(u.last() - u.first() + 1);
    for (long t = u.first(); t <= u.last(); ++t)
        p.values.push_back(u.site(t).squaredNorm() / total);
    return p;
}

std::string to_string(CCKind k) {
    switch (k) {
        case CCKind::vanishing: return "vanishing";
        case CCKind::concentration: return "concentration";
        case CCKind::dichotomy: return "dichotomy";
        default: return "undetermined";
    }
}

namespace {

// Best captured mass in a window of halfwidth N, and where it sits. Near
// the optimum whole ranges of centers tie (windows covering the support);
// report the middle of the tying range so centers track the bump.
std::pair<double, long> best_window_mass(const MassProfile& rho, int N) {
    const long n = static_cast<long>(rho.values.size());
    std::vector<double> sums(n);
    for (long c = 0; c < n; ++c) {
        long lo = std::max<long>(0, c - N);
        long hi = std::min<long>(n - 1, c + N);
        double s = 0;
        for (long i = lo; i <= hi; ++i) s += rho.values[i];
        sums[c] = s;
    }
    double best = *std::max_element(sums.begin(), sums.end());
    long first = -1, last = -1;
    for (long c = 0; c < n; ++c) {
        if (sums[c] >= best - 1e-12) {
            if (first < 0) first = c;
            last = c;
        }
    }
    return {best, rho.base + (first + last) / 2};
}

}  // namespace

CCVerdict cc_classify(const std::vector<MassProfile>& rhos,
                      const std::vector<double>& eps_grid,
                      const std::vector<int>& N_grid) {
    if (rhos.size() < 4) throw ConfigError("need at least 4 profiles to read a trend");
    if (eps_grid.empty() || N_grid.empty())
        throw ConfigError("classification grids must be nonempty");
    for (const auto& rho : rhos) {
        double s = rho.sum();
        if (std::abs(s - 1.0) > 1e-9)
            throw ConfigError("mass profile is not normalized (sum " + std::to_string(s) + ")");
        for (double v : rho.values)
            if (v < 0) throw ConfigError("mass profile has a negative entry");
    }

    std::vector<int> Ns = N_grid;
    std::sort(Ns.begin(), Ns.end());
    const int N_max = Ns.back();
    const size_t n = rhos.size();

    // mass[j][i]: best windowed mass of iterate i at halfwidth Ns[j]
    std::vector<std::vector<double>> mass(Ns.size(), std::vector<double>(n));
    CCVerdict out;
    out.centers.resize(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < Ns.size(); ++j) {
            auto [mval, c] = best_window_mass(rhos[i], Ns[j]);
            mass[j][i] = mval;
            if (Ns[j] == N_max) out.centers[i] = c;
        }
    }

    // Concentration: every eps admits a uniform N capturing 1 - eps.
    bool conc = true;
    for (double eps : eps_grid) {
        bool some_N = false;
        for (size_t j = 0; j < Ns.size() && !some_N; ++j)
            some_N = *std::min_element(mass[j].begin(), mass[j].end()) >= 1.0 - eps;
        conc = conc && some_N;
    }
    if (conc) {
        out.kind = CCKind::concentration;
        out.detail = "recentered windows capture 1-eps uniformly";
        return out;
    }

    // Vanishing: at the largest N the best windowed mass keeps dropping
    // over the last half of the family and ends well below where it was.
    {
        const auto& tail = mass[Ns.size() - 1];
        size_t half = n / 2;
        bool monotone = true;
        for (size_t i = half; i + 1 < n; ++i) monotone = monotone && tail[i + 1] <= tail[i] + 1e-12;
        double mid = tail[half], fin = tail[n - 1];
        if (monotone && fin < 0.5 && fin <= 0.8 * mid) {
            out.kind = CCKind::vanishing;
            out.detail = "windowed mass decays along the family";
            return out;
        }
    }

    // Dichotomy: recentered mass stable in N and iterate, strictly inside
    // (0.05, 0.95); the remaining mass lives at diverging distance.
    if (Ns.size() >= 2) {
        const auto& big = mass[Ns.size() - 1];
        const auto& prev = mass[Ns.size() - 2];
        size_t half = n / 2;
        double fin = big[n - 1];
        bool stable_k = true;
        for (size_t i = half; i < n; ++i) stable_k = stable_k && std::abs(big[i] - fin) <= 0.05;
        bool stable_N = std::abs(big[n - 1] - prev[n - 1]) <= 0.02;
        if (stable_k && stable_N && fin >= 0.05 && fin <= 0.95) {
            out.kind = CCKind::dichotomy;
            out.eta = fin;
            out.detail = "recentered mass plateaus strictly between 0 and 1";
            return out;
        }
    }

    out.kind = CCKind::undetermined;
    return out;
}

BumpDecomposition bump_decompose(const Sequence& u, const SystemModel& m, long sep,
                                 double thresh) {
    if (sep < 3) throw ConfigError("bump separation must be at least 3");
    if (!(thresh > 0)) throw ConfigError("bump threshold must be positive");
    BumpDecomposition out;
    Sequence rest = u;
    IndexSet carved;
    while (true) {
        if (rest.is_zero()) break;
        long peak = rest.peak_index();
        if (rest.site_norm(peak) < thresh) break;
        if (out.bumps.size() >= 64)
            throw NumericsError("more than 64 bumps; threshold is too low");

        // Contiguous region around the peak above a tenth of the threshold.
        long lo = peak, hi = peak;
        while (lo - 1 >= rest.first() && rest.site_norm(lo - 1) > thresh / 10) --lo;
        while (hi + 1 <= rest.last() && rest.site_norm(hi + 1) > thresh / 10) ++hi;

        // Extend by the measured decay length: enough e-foldings to push
        // the leftover tail eight orders below the edge value. Stop early
        // where the profile turns back up (the next bump).
        long extend = 8;
        double edge = std::max(rest.site_norm(lo), rest.site_norm(hi));
        double inner = std::max(rest.site_norm(std::min(lo + 1, peak)),
                                rest.site_norm(std::max(hi - 1, peak)));
        if (edge > 0 && inner > edge) {
            double lambda = edge / inner;
            extend = static_cast<long>(std::ceil(std::log(1e8) / -std::log(lambda)));
            extend = std::clamp<long>(extend, 4, 256);
        }
        for (long step = 0; step < extend && lo - 1 >= rest.first(); ++step) {
            if (rest.site_norm(lo - 1) > rest.site_norm(lo)) break;
            if (rest.site_norm(lo - 1) == 0.0 && rest.site_norm(lo) == 0.0) break;
            --lo;
        }
        for (long step = 0; step < extend && hi + 1 <= rest.last(); ++step) {
            if (rest.site_norm(hi + 1) > rest.site_norm(hi)) break;
            if (rest.site_norm(hi + 1) == 0.0 && rest.site_norm(hi) == 0.0) break;
            ++hi;
        }

        // Keep pieces at distance >= sep from everything already carved.
        while (lo <= hi && !carved.intersect(IndexSet::range(lo - sep + 1, lo)).empty()) ++lo;
        while (hi >= lo && !carved.intersect(IndexSet::range(hi, hi + sep - 1)).empty()) --hi;
        if (lo > hi || peak < lo || peak > hi) {
            // The peak cannot form a piece of its own at this separation;
            // its mass stays in the remainder.
            Sequence spike = Sequence::delta(peak, rest.value(peak));
            rest -= spike;
            carved = carved.unite(IndexSet::range(peak, peak));
            continue;
        }

        std::vector<double> vals;
        vals.reserve((hi - lo + 1) * rest.dim());
        for (long t = lo; t <= hi; ++t) {
            auto x = rest.site(t);
            for (int j = 0; j < rest.dim(); ++j) vals.push_back(x[j]);
        }
        Bump b;
        b.center = peak;
        b.piece = Sequence(rest.dim(), lo - peak, std::move(vals));
        out.bumps.push_back(std::move(b));
        carved = carved.unite(IndexSet::range(lo, hi));

        // zero the carved region
        Sequence cut = out.bumps.back().piece.shifted(peak);
        rest -= cut;
    }
    std::sort(out.bumps.begin(), out.bumps.end(),
              [](const Bump& a, const Bump& b) { return a.center < b.center; });
    Sequence recon(u.dim());
    for (const Bump& b : out.bumps) recon.axpy(1.0, b.piece.shifted(b.center));
    Sequence diff = u;
    diff -= recon;
    out.remainder_norm = norm_star(diff, m);
    return out;
}

DecayEstimate decay_rate(const Sequence& u) {
    if (u.is_zero()) throw ConfigError("decay rate of the zero sequence is undefined");
    // Ignore entries the solver cannot have resolved.
    Sequence v = u.trimmed(1e-9 * u.sup_norm());
    if (v.is_zero()) throw NumericsError("insufficient tail points for a decay fit");

    auto fit_side = [&](bool right) -> double {
        long first = v.first(), last = v.last();
        long peak = v.peak_index();
        long span = right ? last - peak : peak - first;
        long q = std::max<long>(5, span / 4);
        std::vector<double> ts, ys;
        for (long i = 0; i < q; ++i) {
            long t = right ? last - q + 1 + i : first + q - 1 - i;
            double a = v.site_norm(t);
            if (a > 0) {
                ts.push_back(static_cast<double>(right ? t : -t));
                ys.push_back(std::log(a));
            }
        }
        if (ts.size() < 5) throw NumericsError("insufficient tail points for a decay fit");
        double n = static_cast<double>(ts.size());
        double st = 0, sy = 0, stt = 0, sty = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            st += ts[i];
            sy += ys[i];
            stt += ts[i] * ts[i];
            sty += ts[i] * ys[i];
        }
        double slope = (n * sty - st * sy) / (n * stt - st * st);
        return std::exp(slope);  // per-step ratio moving away from the peak
    };

    DecayEstimate est;
    est.lambda_right = fit_side(true);
    est.lambda_left = fit_side(false);
    est.lambda = 0.5 * (est.lambda_left + est.lambda_right);
    est.decaying = est.lambda > 0 && est.lambda < 1;
    return est;
}

}  // namespace hamlock
