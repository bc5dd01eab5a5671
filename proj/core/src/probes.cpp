#include "confham/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confham/jsonl.hpp"

namespace confham {
namespace probes {

namespace {

double radius(const PhaseState& s) {
    double r2 = 0.0;
    for (double x : s.x) r2 += x * x;
    return std::sqrt(r2);
}

// Vertex abscissa of the parabola through three (t, y) samples.
double parabola_vertex(double t0, double y0, double t1, double y1, double t2, double y2) {
    double num = y0 * (t1 * t1 - t2 * t2) - y1 * (t0 * t0 - t2 * t2) + y2 * (t0 * t0 - t1 * t1);
    double den = 2.0 * (y0 * (t1 - t2) - y1 * (t0 - t2) + y2 * (t0 - t1));
    if (den == 0.0) return t1;
    double t = num / den;
    return std::clamp(t, std::min(t0, t2), std::max(t0, t2));
}

double lagrange3(double t, double t0, double y0, double t1, double y1, double t2, double y2) {
    return y0 * (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2)) +
           y1 * (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2)) +
           y2 * (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
}

PhaseState interpolate_state(const dynamics::Trajectory& traj, std::size_t m, double t) {
    const auto& a = traj.samples[m - 1];
    const auto& b = traj.samples[m];
    const auto& c = traj.samples[m + 1];
    int n = b.state.dim();
    PhaseState out{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        out.x[i] = lagrange3(t, a.t, a.state.x[i], b.t, b.state.x[i], c.t, c.state.x[i]);
        out.p[i] = lagrange3(t, a.t, a.state.p[i], b.t, b.state.p[i], c.t, c.state.p[i]);
    }
    return out;
}

// Cumulative unwrapped angle of the (i, j) projection at every sample.
std::vector<double> unwrapped_angle(const dynamics::Trajectory& traj, int i, int j) {
    std::vector<double> theta(traj.samples.size());
    double acc = std::atan2(traj.samples[0].state.x[j], traj.samples[0].state.x[i]);
    theta[0] = acc;
    for (std::size_t m = 1; m < traj.samples.size(); ++m) {
        double ax = traj.samples[m - 1].state.x[i];
        double ay = traj.samples[m - 1].state.x[j];
        double bx = traj.samples[m].state.x[i];
        double by = traj.samples[m].state.x[j];
        acc += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        theta[m] = acc;
    }
    return theta;
}

double interp_linear(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return ys.front();
    if (it == ts.end()) return ys.back();
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    std::size_t lo = hi - 1;
    double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

struct RecurrenceScan {
    double best = std::numeric_limits<double>::infinity();
    int best_multiple = 0;
};

// Minimum normalized distance to the initial state inside +-5% windows
// around integer multiples of the radial period. The refinement interpolates
// the squared distance, which is parabolic through a transversal closest
// approach (the distance itself has a cusp there).
RecurrenceScan scan_recurrence(const dynamics::Trajectory& traj, double period, int multiples,
                               double norm0) {
    RecurrenceScan out;
    const auto& z0 = traj.samples.front().state;
    std::vector<double> ts(traj.samples.size()), d2s(traj.samples.size());
    for (std::size_t m = 0; m < traj.samples.size(); ++m) {
        ts[m] = traj.samples[m].t;
        double d2 = 0.0;
        const auto& st = traj.samples[m].state;
        for (int i = 0; i < st.dim(); ++i) {
            d2 += (st.x[i] - z0.x[i]) * (st.x[i] - z0.x[i]);
            d2 += (st.p[i] - z0.p[i]) * (st.p[i] - z0.p[i]);
        }
        d2s[m] = d2;
    }
    for (int mult = 1; mult <= multiples; ++mult) {
        double lo = period * mult * 0.95;
        double hi = period * mult * 1.05;
        if (lo > ts.back()) break;
        auto lo_it = std::lower_bound(ts.begin(), ts.end(), lo);
        auto hi_it = std::upper_bound(ts.begin(), ts.end(), hi);
        if (lo_it == hi_it) continue;
        std::size_t lo_idx = static_cast<std::size_t>(lo_it - ts.begin());
        std::size_t hi_idx = static_cast<std::size_t>(hi_it - ts.begin());
        std::size_t arg = lo_idx;
        for (std::size_t m = lo_idx; m < hi_idx; ++m)
            if (d2s[m] < d2s[arg]) arg = m;
        double d2min = d2s[arg];
        if (arg > 0 && arg + 1 < d2s.size()) {
            double tv = parabola_vertex(ts[arg - 1], d2s[arg - 1], ts[arg], d2s[arg], ts[arg + 1],
                                        d2s[arg + 1]);
            double dv = lagrange3(tv, ts[arg - 1], d2s[arg - 1], ts[arg], d2s[arg], ts[arg + 1],
                                  d2s[arg + 1]);
            d2min = std::min(d2min, std::max(dv, 0.0));
        }
        double dmin = std::sqrt(d2min) / norm0;
        if (dmin < out.best) {
            out.best = dmin;
            out.best_multiple = mult;
        }
    }
    return out;
}

struct OrbitRun {
    dynamics::Trajectory traj;
    bool bounded = true;
    bool aborted = false;
    std::string diagnostic;
};

// Integrates in chunks until the time budget or escape; budget defaults to
// about 40 radial periods once a period estimate exists.
OrbitRun run_orbit(const ModelParams& params, const PhaseState& initial,
                   const ClosureOptions& opts) {
    OrbitRun run;
    run.traj.params = params;
    run.traj.method = opts.method;
    run.traj.step = opts.step;
    run.traj.samples.push_back({0.0, initial, eval_hamiltonian(params, initial)});

    const double r_escape = opts.escape_factor * std::max(radius(initial), 1e-6);
    const double hard_cap = opts.t_max > 0.0 ? opts.t_max : 2000.0;
    double budget = opts.t_max > 0.0 ? opts.t_max : -1.0;

    PhaseState cur = initial;
    double t = 0.0;
    const double chunk = 20.0;
    while (true) {
        double target = budget > 0.0 ? std::min(budget, hard_cap) : hard_cap;
        if (t >= target * (1.0 - 1e-12)) break;
        double t_piece = std::min(chunk, target - t);
        dynamics::Trajectory piece;
        dynamics::IntegrateOptions iopts;
        iopts.rk_tol = opts.rk_tol;
        iopts.max_step = opts.step;
        try {
            piece = dynamics::integrate(params, cur, t_piece, opts.step, opts.method, iopts);
        } catch (const dynamics::IntegrationAbort& abort) {
            run.aborted = true;
            run.diagnostic = abort.what();
            return run;
        }
        for (std::size_t m = 1; m < piece.samples.size(); ++m) {
            auto s = piece.samples[m];
            s.t += t;
            run.traj.samples.push_back(std::move(s));
            if (radius(run.traj.samples.back().state) > r_escape) {
                run.bounded = false;
                run.diagnostic = "escaped r > " + std::to_string(r_escape);
                return run;
            }
        }
        cur = run.traj.samples.back().state;
        t = run.traj.samples.back().t;

        if (budget < 0.0) {
            // Derive the default budget (40 radial periods) from early events.
            RadialEvents ev = radial_events(run.traj);
            if (ev.diagnostic == "circular") {
                budget = std::min(hard_cap, 80.0);
            } else if (ev.events.size() >= 3) {
                double period = (ev.events.back().first - ev.events.front().first) /
                                static_cast<double>(ev.events.size() - 1);
                budget = std::min(hard_cap, 40.0 * period);
            }
        }
    }
    return run;
}

ClosureReport closure_once(const ModelParams& params, const PhaseState& initial,
                           const ClosureOptions& opts) {
    ClosureReport rep;
    rep.params = params;
    rep.initial = initial;
    rep.recurrence_distance = std::numeric_limits<double>::infinity();

    OrbitRun run = run_orbit(params, initial, opts);
    rep.diagnostic = run.diagnostic;
    if (run.aborted) {
        rep.verdict = "undetermined";
        return rep;
    }
    if (!run.bounded) {
        rep.bounded = false;
        rep.verdict = "open";
        return rep;
    }

    double norm0 = std::max(initial.norm(), 1e-12);
    RadialEvents ev = radial_events(run.traj);
    rep.n_events = static_cast<int>(ev.events.size());

    if (ev.events.size() < 2) {
        if (ev.diagnostic == "circular") {
            // No radial structure; fall back to the best recurrence anywhere
            // past a quarter of the run.
            double t_end = run.traj.samples.back().t;
            double best = std::numeric_limits<double>::infinity();
            const auto& z0 = run.traj.samples.front().state;
            for (const auto& s : run.traj.samples) {
                if (s.t < 0.25 * t_end) continue;
                double d2 = 0.0;
                for (int i = 0; i < s.state.dim(); ++i) {
                    d2 += (s.state.x[i] - z0.x[i]) * (s.state.x[i] - z0.x[i]);
                    d2 += (s.state.p[i] - z0.p[i]) * (s.state.p[i] - z0.p[i]);
                }
                best = std::min(best, std::sqrt(d2) / norm0);
            }
            rep.recurrence_distance = best;
            rep.diagnostic = "circular";
            rep.verdict = best <= opts.epsilon ? "closed" : "undetermined";
        } else {
            rep.verdict = "undetermined";
            rep.diagnostic = rep.diagnostic.empty() ? "too few radial events" : rep.diagnostic;
        }
        return rep;
    }

    std::vector<double> gaps;
    for (std::size_t m = 1; m < ev.events.size(); ++m)
        gaps.push_back(ev.events[m].first - ev.events[m - 1].first);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    rep.radial_period = gaps[gaps.size() / 2];

    if (params.n == 2) {
        try {
            rep.rotation_number = rotation_number(run.traj, 0, 1);
            rep.rational =
                rational_detect(*rep.rotation_number, opts.rational_q_max, opts.rational_tol);
        } catch (const std::exception&) {
            // leave rotation data absent
        }
    }

    RecurrenceScan scan = scan_recurrence(run.traj, rep.radial_period, opts.period_multiples,
                                          norm0);
    rep.recurrence_distance = scan.best;
    rep.verdict = scan.best <= opts.epsilon ? "closed" : "open";
    return rep;
}

}  // namespace

RadialEvents radial_events(const dynamics::Trajectory& traj) {
    if (traj.samples.size() < 3)
        throw std::invalid_argument("radial_events: need at least 3 samples");
    RadialEvents out;
    std::vector<double> r(traj.samples.size());
    double r_lo = std::numeric_limits<double>::infinity(), r_hi = 0.0;
    for (std::size_t m = 0; m < traj.samples.size(); ++m) {
        r[m] = radius(traj.samples[m].state);
        r_lo = std::min(r_lo, r[m]);
        r_hi = std::max(r_hi, r[m]);
    }
    if (r_hi - r_lo <= 1e-9 * std::max(1.0, r_hi)) {
        out.diagnostic = "circular";
        return out;
    }
    for (std::size_t m = 1; m + 1 < traj.samples.size(); ++m) {
        if (r[m] < r[m - 1] && r[m] < r[m + 1]) {
            double t0 = traj.samples[m - 1].t, t1 = traj.samples[m].t, t2 = traj.samples[m + 1].t;
            double tv = parabola_vertex(t0, r[m - 1], t1, r[m], t2, r[m + 1]);
            out.events.emplace_back(tv, interpolate_state(traj, m, tv));
        }
    }
    if (out.events.empty()) out.diagnostic = "no_minima";
    return out;
}

double rotation_number(const dynamics::Trajectory& traj, int axis_i, int axis_j) {
    RadialEvents ev = radial_events(traj);
    if (ev.events.size() < 2)
        throw std::domain_error("rotation_number: fewer than 2 radial events (" +
                                (ev.diagnostic.empty() ? "unbounded or short run" : ev.diagnostic) +
                                ")");
    std::vector<double> ts(traj.samples.size());
    for (std::size_t m = 0; m < traj.samples.size(); ++m) ts[m] = traj.samples[m].t;
    std::vector<double> theta = unwrapped_angle(traj, axis_i, axis_j);
    double th_first = interp_linear(ts, theta, ev.events.front().first);
    double th_last = interp_linear(ts, theta, ev.events.back().first);
    double periods = static_cast<double>(ev.events.size() - 1);
    return (th_last - th_first) / (2.0 * M_PI * periods);
}

std::optional<std::pair<long, long>> rational_detect(double x, long q_max, double tol) {
    if (q_max < 1 || !(tol > 0.0))
        throw std::invalid_argument("rational_detect: need q_max >= 1 and tol > 0");
    if (!std::isfinite(x)) return std::nullopt;
    double sign = x < 0.0 ? -1.0 : 1.0;
    double y = std::abs(x);

    long p_prev = 1, q_prev = 0;
    long p_cur = static_cast<long>(std::floor(y));
    long q_cur = 1;
    double frac = y - std::floor(y);
    for (int depth = 0; depth < 64; ++depth) {
        if (q_cur > q_max) break;
        if (std::abs(y - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <= tol)
            return std::make_pair(static_cast<long>(sign) * p_cur, q_cur);
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long a = static_cast<long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long p_next = a * p_cur + p_prev;
        long q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return std::nullopt;
}

ClosureReport closure_test(const ModelParams& params, const PhaseState& initial,
                           const ClosureOptions& opts) {
    params.validate();
    check_state(params, initial);
    ClosureReport rep = closure_once(params, initial, opts);
    if (opts.halving_check && rep.verdict == "closed") {
        ClosureOptions fine = opts;
        fine.step = opts.step / 2.0;
        fine.rk_tol = opts.rk_tol / 16.0;  // one order of the embedded pair
        fine.halving_check = false;
        ClosureReport check = closure_once(params, initial, fine);
        // Refinement may move a sub-resolution recurrence off its floor of
        // zero; anything still comfortably below epsilon counts as persisting.
        bool persists = check.verdict == "closed" &&
                        check.recurrence_distance <=
                            std::max(1.5 * rep.recurrence_distance, 0.5 * opts.epsilon);
        if (!persists) {
            rep.verdict = "undetermined";
            rep.diagnostic = "closure did not survive step halving (d = " +
                             std::to_string(rep.recurrence_distance) + " -> " +
                             std::to_string(check.recurrence_distance) + ")";
        }
    }
    return rep;
}

double conservation_drift(const dynamics::Trajectory& traj,
                          const observables::Observable& obs) {
    if (traj.samples.empty()) throw std::invalid_argument("conservation_drift: empty trajectory");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (const auto& s : traj.samples) {
        double v = observables::eval(obs, s.state);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    double mean = sum / static_cast<double>(traj.samples.size());
    return (hi - lo) / std::max(std::abs(mean), 1e-30);
}

PhaseState sample_initial_condition(const ModelParams& params, Rng& rng) {
    PhaseState s(std::vector<double>(params.n), std::vector<double>(params.n));
    for (int i = 0; i < params.n; ++i) s.x[i] = rng.uniform(0.6, 1.6);
    for (int i = 0; i < params.n; ++i) s.p[i] = rng.uniform(-0.8, 0.8);
    return s;
}

ScanTable parameter_scan(const ModelParams& tmpl, const std::vector<double>& k_grid,
                         const std::vector<double>& s_grid, int n_ic, std::uint64_t seed,
                         const ClosureOptions& opts) {
    if (k_grid.empty() || s_grid.empty())
        throw std::invalid_argument("parameter_scan: grids must be nonempty");
    if (n_ic < 1) throw std::invalid_argument("parameter_scan: n_ic must be positive");

    ScanTable table;
    table.k_grid = k_grid;
    table.s_grid = s_grid;
    table.seed = seed;

    for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            ModelParams params = tmpl;
            params.k = k_grid[ki];
            params.s = s_grid[si];
            params.validate();

            ScanCell cell;
            cell.k = params.k;
            cell.s = params.s;
            cell.n_samples = n_ic;
            int closed = 0, determined = 0;
            double rec_sum = 0.0;
            for (int ic = 0; ic < n_ic; ++ic) {
                Rng rng(Rng::mix(seed, ki * 1000 + si + 1, static_cast<std::uint64_t>(ic) + 1));
                std::string verdict = "undetermined";
                double rec = std::numeric_limits<double>::quiet_NaN();
                for (int attempt = 0; attempt < 20; ++attempt) {
                    PhaseState init = sample_initial_condition(params, rng);
                    if (!state_admissible(params, init)) continue;
                    if (params.central_sign == -1 && eval_hamiltonian(params, init) >= 0.0)
                        continue;  // bound-orbit filter for attractive members
                    ClosureReport rep;
                    try {
                        rep = closure_test(params, init, opts);
                    } catch (const std::exception&) {
                        continue;
                    }
                    if (!rep.bounded) continue;  // escaped early: resample
                    verdict = rep.verdict;
                    rec = rep.recurrence_distance;
                    break;
                }
                if (verdict == "closed") ++closed;
                if (verdict != "undetermined") {
                    ++determined;
                    if (std::isfinite(rec)) rec_sum += rec;
                }
            }
            cell.n_undetermined = n_ic - determined;
            if (determined == 0) {
                cell.closure_fraction = std::numeric_limits<double>::quiet_NaN();
                cell.mean_recurrence = std::numeric_limits<double>::quiet_NaN();
            } else {
                cell.closure_fraction = static_cast<double>(closed) / n_ic;
                cell.mean_recurrence = rec_sum / determined;
            }
            table.cells.push_back(cell);
        }
    }
    return table;
}

std::string scan_to_csv(const ScanTable& table) {
    std::string out = "k,s,closure_fraction,n_samples,mean_recurrence\n";
    for (const auto& c : table.cells) {
        out += io::fmt_double(c.k) + "," + io::fmt_double(c.s) + ",";
        out += (std::isnan(c.closure_fraction) ? "nan" : io::fmt_double(c.closure_fraction));
        out += "," + std::to_string(c.n_samples) + ",";
        out += (std::isnan(c.mean_recurrence) ? "nan" : io::fmt_double(c.mean_recurrence));
        out += "\n";
    }
    return out;
}

std::string closure_report_to_json(const ClosureReport& report) {
    std::string out = "{";
    out += "\"params\":" + io::model_to_json(report.params);
    out += ",\"initial\":" + io::state_to_json(report.initial);
    out += std::string(",\"bounded\":") + (report.bounded ? "true" : "false");
    out += ",\"rotation_number\":";
    out += report.rotation_number ? io::fmt_double(*report.rotation_number) : "null";
    out += ",\"rational\":";
    if (report.rational) {
        out += "{\"p\":" + std::to_string(report.rational->first) +
               ",\"q\":" + std::to_string(report.rational->second) + "}";
    } else {
        out += "null";
    }
    out += ",\"recurrence_distance\":" + io::fmt_double(report.recurrence_distance);
    out += ",\"radial_period\":" + io::fmt_double(report.radial_period);
    out += ",\"n_events\":" + std::to_string(report.n_events);
    out += ",\"verdict\":\"" + report.verdict + "\"";
    out += ",\"diagnostic\":\"" + report.diagnostic + "\"";
    out += "}";
    return out;
}

}  // namespace probes
}  // namespace confham
