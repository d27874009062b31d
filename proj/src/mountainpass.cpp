#include "hamlock/mountainpass.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <tuple>

namespace hamlock {

int Path::argmax_node() const {
    return static_cast<int>(std::max_element(levels.begin(), levels.end()) - levels.begin());
}

double Path::level() const { return *std::max_element(levels.begin(), levels.end()); }

Sequence negative_endpoint(const SystemModel& m) {
    const Witness& w = m.witness();
    Sequence unit = Sequence::delta(w.t0, w.x0);
    double lambda = 1.0;
    for (int d = 0; d <= 60; ++d) {
        Sequence cand = unit.scaled(lambda);
        if (action(cand, m) < -1.0) return cand;
        lambda *= 2.0;
    }
    throw NumericsError(
        "action failed to turn negative along the witness ray; witness is broken");
}

Path initial_path(const SystemModel& m, int nodes) {
    if (nodes < 3) throw ConfigError("a path needs at least 3 nodes");
    Sequence w = negative_endpoint(m);
    Path p;
    p.nodes.reserve(nodes);
    for (int j = 0; j < nodes; ++j) {
        double s = static_cast<double>(j) / (nodes - 1);
        p.nodes.push_back(w.scaled(s));
        p.levels.push_back(action(p.nodes.back(), m));
    }
    return p;
}

namespace {

void validate_path(const Path& p, const SystemModel& m) {
    if (p.nodes.size() < 3) throw ConfigError("a path needs at least 3 nodes");
    if (!p.nodes.front().is_zero()) throw ConfigError("path must start at the zero sequence");
    if (!(action(p.nodes.back(), m) < 0)) throw ConfigError("path endpoint must have negative action");
}

struct NodeWorkers {
    std::vector<OperatorA> ops;  // one per worker, so solves never share state

    NodeWorkers(const SystemModel& m, const Window& w, int count) {
        for (int i = 0; i < count; ++i) ops.emplace_back(m, w);
    }
};

// Runs fn(i, worker) for i in [begin, end) over the worker pool.
template <typename Fn>
void parallel_nodes(long begin, long end, int workers, Fn&& fn) {
    if (end <= begin) return;
    long count = end - begin;
    int used = static_cast<int>(std::min<long>(workers, count));
    if (used <= 1) {
        for (long i = begin; i < end; ++i) fn(i, 0);
        return;
    }
    std::vector<std::future<void>> futs;
    for (int wkr = 0; wkr < used; ++wkr) {
        futs.push_back(std::async(std::launch::async, [=, &fn]() {
            for (long i = begin + wkr; i < end; i += used) fn(i, wkr);
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace

namespace {

// Action along the chord (1-s) a + s b, maximized over the interior by a
// coarse scan plus golden-section refinement. The discrete node maximum
// alone underestimates the path level wherever the chain straddles the
// ridge between nodes.
struct SegmentProbe {
    double value = -std::numeric_limits<double>::infinity();
    double arg = 0.5;
};

SegmentProbe probe_segment(const Sequence& a, const Sequence& b, const SystemModel& m) {
    // Along the chord u(s) = a + s d the quadratic part of the action is an
    // exact parabola; only the potential sum needs per-site work.
    Sequence d = b;
    d -= a;
    const double qa = inner_star(d, d, m);
    const double qb = inner_star(a, d, m);
    const double qc = inner_star(a, a, m);

    // Sites where both endpoint and direction are tiny contribute nothing
    // measurable to the potential sum; clip them out of the eval loop.
    long lo_t = 0, hi_t = -1;
    {
        auto active = [&](long t) {
            return a.site_norm(t) > 1e-7 || d.site_norm(t) > 1e-7;
        };
        long lo_all = std::numeric_limits<long>::max(), hi_all = std::numeric_limits<long>::min();
        if (!a.is_zero()) {
            lo_all = std::min(lo_all, a.first());
            hi_all = std::max(hi_all, a.last());
        }
        if (!d.is_zero()) {
            lo_all = std::min(lo_all, d.first());
            hi_all = std::max(hi_all, d.last());
        }
        if (lo_all <= hi_all) {
            lo_t = lo_all;
            hi_t = hi_all;
            while (lo_t < hi_t && !active(lo_t)) ++lo_t;
            while (hi_t > lo_t && !active(hi_t)) --hi_t;
        }
    }
    const int n = m.dim();
    Eigen::VectorXd x(n);
    auto at = [&](double s) {
        double pot = 0;
        for (long t = lo_t; t <= hi_t; ++t) {
            if (!a.is_zero() && t >= a.first() && t <= a.last())
                x = a.site(t);
            else
                x.setZero();
            if (!d.is_zero() && t >= d.first() && t <= d.last()) x += s * d.site(t);
            pot += m.V(t, x);
        }
        return 0.5 * (qa * s * s + 2.0 * qb * s + qc) - pot;
    };

    SegmentProbe best;
    for (int i = 1; i < 16; ++i) {
        double s = i / 16.0;
        double v = at(s);
        if (v > best.value) {
            best.value = v;
            best.arg = s;
        }
    }
    double lo = best.arg - 1.0 / 16.0, hi = best.arg + 1.0 / 16.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 20 && hi - lo > 1e-5; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = at(x1);
        }
    }
    double mid = 0.5 * (lo + hi), fm = at(mid);
    if (fm > best.value) {
        best.value = fm;
        best.arg = mid;
    }
    return best;
}

// Node chain with cached per-segment interior maxima.
struct Chain {
    std::vector<Sequence> nodes;
    std::vector<double> levels;
    std::vector<SegmentProbe> segs;  // segs[i] spans nodes[i]..nodes[i+1]
    const SystemModel* model = nullptr;

    void reprobe(size_t i) { segs[i] = probe_segment(nodes[i], nodes[i + 1], *model); }
    void invalidate_around(size_t node_idx) {
        if (node_idx > 0) reprobe(node_idx - 1);
        if (node_idx + 1 < nodes.size()) reprobe(node_idx);
    }

    // Path level including segment interiors. Returns (value, node index,
    // segment flag): when seg is true the max sits inside segment `idx`.
    std::tuple<double, size_t, bool> peak() const {
        double best = levels[0];
        size_t idx = 0;
        bool seg = false;
        for (size_t i = 1; i < levels.size(); ++i)
            if (levels[i] > best) {
                best = levels[i];
                idx = i;
            }
        for (size_t i = 0; i < segs.size(); ++i)
            if (segs[i].value > best) {
                best = segs[i].value;
                idx = i;
                seg = true;
            }
        return {best, idx, seg};
    }

    // Materialize the interior argmax of segment i as a node; returns its index.
    size_t insert_at(size_t i) {
        double s = segs[i].arg;
        Sequence mid = nodes[i].scaled(1.0 - s);
        mid.axpy(s, nodes[i + 1]);
        double lvl = action(mid, *model);
        nodes.insert(nodes.begin() + i + 1, std::move(mid));
        levels.insert(levels.begin() + i + 1, lvl);
        segs.insert(segs.begin() + i + 1, SegmentProbe{});
        reprobe(i);
        reprobe(i + 1);
        return i + 1;
    }

    // Drop interior node i when the joined segment is short, hides no
    // peak above level_ref, and dominates the node's own height. The
    // cached probe keeps the removed region represented in the level.
    bool try_remove(size_t i, double max_gap, double level_ref) {
        if (i == 0 || i + 1 >= nodes.size()) return false;
        Sequence joined = nodes[i + 1];
        joined -= nodes[i - 1];
        if (norm_star(joined, *model) > max_gap) return false;
        SegmentProbe j = probe_segment(nodes[i - 1], nodes[i + 1], *model);
        if (j.value > level_ref + 1e-12) return false;
        if (levels[i] > j.value + 1e-12) return false;
        nodes.erase(nodes.begin() + i);
        levels.erase(levels.begin() + i);
        segs.erase(segs.begin() + i);
        segs[i - 1] = j;
        return true;
    }
};

}  // namespace

std::pair<Path, MinimaxEstimate> deform_path(const Path& p, const SystemModel& m,
                                             int rounds, const DeformControl& ctrl) {
    if (rounds < 1) throw ConfigError("deformation needs at least one round");
    validate_path(p, m);

    Chain chain;
    chain.model = &m;
    chain.nodes = p.nodes;
    chain.levels.resize(chain.nodes.size());
    for (size_t i = 0; i < chain.nodes.size(); ++i)
        chain.levels[i] = action(chain.nodes[i], m);
    chain.segs.resize(chain.nodes.size() - 1);
    for (size_t i = 0; i < chain.segs.size(); ++i) chain.reprobe(i);

    const int workers = std::max(1, thread_cap());
    NodeWorkers pool(m, ctrl.window, workers);

    DescentControl dc = ctrl.descent;
    dc.record_iterates = false;
    // Displacement-capped steps keep the re-densification ahead of the flow.
    if (dc.max_move <= 0) dc.max_move = std::max(0.5 * ctrl.delta_path, 0.25);

    auto descend_node = [&](Sequence& node, double& level, int steps, int worker) -> bool {
        FlowTrajectory traj =
            descend(restrict_to(node, ctrl.window), m, pool.ops[worker], steps, dc);
        bool did_move = traj.actions.size() > 1;
        node = traj.iterates.back();
        level = traj.actions.back();
        return did_move;
    };

    MinimaxEstimate est;
    for (int round = 0; round < rounds; ++round) {
        // Flow phase: descend the nodes in the top band of the path. Nodes
        // well below the current level are already deformed; moving them
        // further only stretches the path.
        double level_now = std::get<0>(chain.peak());
        double band_floor = level_now - std::max(0.2, 0.25 * std::abs(level_now));
        std::vector<char> moved(chain.nodes.size(), 0);
        parallel_nodes(1, static_cast<long>(chain.nodes.size()) - 1, workers,
                       [&](long i, int worker) {
                           if (chain.levels[i] < band_floor) return;
                           moved[i] = descend_node(chain.nodes[i], chain.levels[i],
                                                   ctrl.steps_per_node, worker);
                       });
        bool any_moved = std::any_of(moved.begin(), moved.end(), [](char c) { return c != 0; });
        for (size_t i = 0; i < chain.segs.size(); ++i)
            if (moved[i] || moved[i + 1]) chain.reprobe(i);

        // Re-densify oversized gaps so the flow stays a path deformation.
        if (any_moved) {
            for (size_t i = 0; i + 1 < chain.nodes.size() &&
                              static_cast<long>(chain.nodes.size()) < ctrl.max_nodes;
                 ++i) {
                if (!moved[i] && !moved[i + 1]) continue;
                Sequence gap = chain.nodes[i + 1];
                gap -= chain.nodes[i];
                if (norm_star(gap, m) > ctrl.delta_path) {
                    size_t j = chain.insert_at(i);
                    moved.insert(moved.begin() + j, 1);
                }
            }
        }

        // Polish phase: push the path peak (a node, or a segment interior
        // materialized on demand) until the level cannot exceed the
        // previous record or the peak is critical.
        bool peak_critical = false;
        if (!est.history.empty()) {
            double target = est.history.back();
            // Aim strictly below the previous record; the pass height is
            // the only thing that can stop the push.
            double goal = target - std::max(ctrl.plateau_tol, 0.01 * std::abs(target));
            double checkpoint = std::numeric_limits<double>::infinity();
            for (int b = 0; b < ctrl.polish_budget; ++b) {
                auto [val, idx, seg] = chain.peak();
                if (val <= goal) break;
                // Saturated against the pass height: spending the rest of
                // the budget cannot move the level.
                if (b % 64 == 0) {
                    if (val > checkpoint - ctrl.plateau_tol) break;
                    checkpoint = val;
                }
                size_t j = seg ? chain.insert_at(idx) : idx;
                if (j == 0 || j + 1 == chain.nodes.size()) break;
                if (!descend_node(chain.nodes[j], chain.levels[j], 1, 0)) {
                    peak_critical = true;
                    break;
                }
                chain.invalidate_around(j);
                // Knocked-down peaks become debris once the segment probe
                // dominates them; drop them right away.
                if (chain.levels[j] <= goal)
                    chain.try_remove(j, ctrl.delta_path, std::get<0>(chain.peak()));
                if (static_cast<long>(chain.nodes.size()) >= ctrl.max_nodes) break;
            }
        }
        // Prune: nodes whose removal leaves a short segment carrying no
        // hidden peak are redundant; without this the polish insertions
        // grow the chain without bound.
        {
            double level_ref = std::get<0>(chain.peak());
            for (size_t i = 1; i + 1 < chain.nodes.size();) {
                if (!chain.try_remove(i, ctrl.delta_path, level_ref)) ++i;
            }
        }

        est.history.push_back(std::get<0>(chain.peak()));

        // Plateau: level stopped dropping across the trailing window.
        bool window_full = static_cast<int>(est.history.size()) > ctrl.plateau_rounds;
        double drop = window_full
                          ? est.history[est.history.size() - 1 - ctrl.plateau_rounds] -
                                est.history.back()
                          : 0.0;
        if (peak_critical || (window_full && drop < ctrl.plateau_tol)) {
            est.plateau_reached = true;
            break;
        }
    }

    Path path;
    path.nodes = std::move(chain.nodes);
    path.levels = std::move(chain.levels);
    est.level = est.history.back();
    est.argmax_node = path.argmax_node();
    return {std::move(path), std::move(est)};
}

OneBumpResult find_one_bump(const SystemModel& m, const OneBumpConfig& cfg) {
    OneBumpResult out;
    Window win = Window::symmetric(cfg.window);

    Sequence seed(m.dim());
    if (cfg.seed) {
        seed = restrict_to(*cfg.seed, win);
    } else {
        Path p0 = initial_path(m, cfg.path_nodes);
        DeformControl dc = cfg.deform;
        dc.window = win;
        auto [path, est] = deform_path(p0, m, cfg.max_rounds, dc);
        seed = path.nodes[est.argmax_node];
        out.minimax = std::move(est);
        out.path = std::move(path);
    }

    // Recenter: move the peak site into [0, T) by a period shift.
    long t_peak = seed.peak_index();
    long target = ((t_peak % m.period()) + m.period()) % m.period();
    out.recenter_shift = target - t_peak;
    if (out.recenter_shift != 0)
        seed = restrict_to(seed.shifted(out.recenter_shift), win);

    out.report = newton_refine(seed, m, win, cfg.newton);

    // Window adequacy audit: the stored tail must carry (numerically) no
    // energy, else redo on a wider window.
    for (int attempt = 0; attempt < 3 && out.report.converged; ++attempt) {
        const Sequence& v = out.report.solution;
        long half = out.report.window_used;
        IndexSet tail = IndexSet::range(-half, -(half - 4)).unite(IndexSet::range(half - 4, half));
        double tail_energy = window_energy(v, tail, m);
        double total = inner_star(v, v, m);
        if (tail_energy <= 1e-16 * total) break;
        Window bigger = Window::symmetric(half + half / 2);
        out.report = newton_refine(v, m, bigger, cfg.newton);
    }

    // A one-bump must be a nonzero critical point at positive action.
    if (out.report.converged) {
        double vnorm = norm_star(out.report.solution, m);
        if (vnorm <= 1e-3 || out.report.action_value <= 0) {
            out.report.converged = false;
            out.report.zero_solution = vnorm <= 1e-3;
        }
    }

    // For x -> -x symmetric potentials -v is the same orbit; report the
    // representative aligned with the witness direction.
    if (out.report.converged) {
        const Witness& w = m.witness();
        Eigen::VectorXd probe = 0.7 * w.x0;
        bool even = std::abs(m.V(w.t0, probe) - m.V(w.t0, -probe)) <=
                    1e-12 * (1.0 + std::abs(m.V(w.t0, probe)));
        const Sequence& v = out.report.solution;
        if (even && v.value(v.peak_index()).dot(w.x0) < 0) {
            out.report.solution = v.scaled(-1.0);
        }
    }
    return out;
}

}  // namespace hamlock
