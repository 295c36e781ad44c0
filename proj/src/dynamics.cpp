#include "sirbif/dynamics.hpp"

#include "sirbif/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace sirbif {
namespace {

// Left eigenvector l of JF(center) for the multiplier with Im > 0, so that
// w = l^T (s - center) evolves as w -> t1 w to first order.
Eigen::Vector3cd eigenplane_projector(const Params& p, const State3& center)
{
    const Mat3 j = jacobian_at(p, center);
    Eigen::EigenSolver<Mat3> es(j.transpose());
    int pick = -1;
    double best = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double im = es.eigenvalues()(i).imag();
        if (im > best) {
            best = im;
            pick = i;
        }
    }
    if (pick < 0 || best < 1e-12) {
        throw PreconditionError("eigenplane: JF has no complex multiplier pair at the center");
    }
    Eigen::Vector3cd l = es.eigenvectors().col(pick);
    return l / l.norm();
}

cplx project(const Eigen::Vector3cd& l, const State3& s, const State3& center)
{
    const Vec3 d = s.vec() - center.vec();
    return l(0) * d(0) + l(1) * d(1) + l(2) * d(2);
}

// Newton on F^m(x) - x from x0.  Returns the converged point or nothing.
std::optional<State3> newton_cycle_point(const Params& p, const State3& x0, int m, double tol)
{
    State3 x = x0;
    for (int it = 0; it < 30; ++it) {
        State3 y = x;
        Mat3 dm = Mat3::Identity();
        for (int k = 0; k < m; ++k) {
            dm = jacobian_at(p, y) * dm;
            y = map_step(p, y);
        }
        const Vec3 g = y.vec() - x.vec();
        if (!g.allFinite()) {
            return std::nullopt;
        }
        if (g.norm() < tol) {
            return x;
        }
        const Mat3 a = dm - Mat3::Identity();
        const Vec3 step = a.fullPivLu().solve(-g);
        if (!step.allFinite()) {
            return std::nullopt;
        }
        x = State3::from(x.vec() + step);
    }
    return std::nullopt;
}

// Accepts a loosely recurrent period only if Newton finds a stable cycle
// next to the samples; returns its minimal period.
std::optional<PeriodVerdict> confirm_cycle(const Params& p, const std::vector<State3>& samples, int m, double loose)
{
    const double scale = p.N;
    const State3& last = samples.back();
    const auto x = newton_cycle_point(p, last, m, 1e-12 * scale);
    if (!x || distance(*x, last) > loose) {
        return std::nullopt;
    }
    for (int d = 1; d <= m; ++d) {
        if (m % d != 0) {
            continue;
        }
        State3 y = *x;
        Mat3 dm = Mat3::Identity();
        for (int k = 0; k < d; ++k) {
            dm = jacobian_at(p, y) * dm;
            y = map_step(p, y);
        }
        const double res = distance(y, *x);
        if (res < 1e-9 * scale) {
            Eigen::EigenSolver<Mat3> es(dm, false);
            const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
            if (radius >= 1.0) {
                return std::nullopt;
            }
            return PeriodVerdict{PeriodKind::Periodic, d, res};
        }
    }
    return std::nullopt;
}

// max_i |s[i+m] - s[i]|, abandoning the scan once it reaches `cap`.
double recurrence_residual(const std::vector<State3>& samples, int m, double cap)
{
    double worst = 0.0;
    for (std::size_t i = 0; i + m < samples.size() && worst < cap; ++i) {
        worst = std::max(worst, distance(samples[i + m], samples[i]));
    }
    return worst;
}

double mean_nearest_neighbour(const std::vector<Vec3>& pts)
{
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j) {
                best = std::min(best, (pts[i] - pts[j]).squaredNorm());
            }
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(pts.size());
}

State3 default_seed(const Params& p)
{
    const double kick = 1e-3 * p.N;
    if (p.alpha > p.beta + p.r) {
        const State3 e = endemic_point(p);
        return {e.x + kick, e.y - kick, e.z};
    }
    return {p.N - kick, kick, 0.0};
}

void set_param(Params& p, SweepParam which, double v)
{
    switch (which) {
    case SweepParam::N: p.N = v; break;
    case SweepParam::Beta: p.beta = v; break;
    case SweepParam::R: p.r = v; break;
    case SweepParam::Alpha: p.alpha = v; break;
    }
}

}  // namespace

OrbitSummary iterate(const Params& p, const State3& s0, std::size_t n_transient, std::size_t n_keep,
                     const IterateOptions& options)
{
    if (!p.finite() || !s0.finite()) {
        throw InvalidInput("iterate: non-finite parameters or seed");
    }
    if (!(p.N > 0.0)) {
        throw InvalidInput("iterate: N must be positive");
    }
    OrbitSummary out;
    out.samples.reserve(n_keep);
    const double limit = options.divergence_factor * p.N;
    const double dev0 = s0.sum() - p.N;
    const double shrink = 1.0 - p.beta;
    double dev = dev0;
    State3 s = s0;
    out.max_norm = norm(s);
    const std::size_t total = n_transient + n_keep;
    for (std::size_t n = 1; n <= total; ++n) {
        s = map_step(p, s);
        dev *= shrink;
        if (!s.finite()) {
            throw NumericalBlowup("iterate: non-finite state", n);
        }
        const double nrm = norm(s);
        out.max_norm = std::max(out.max_norm, nrm);
        if (nrm > limit) {
            out.diverged = true;
            out.diverged_at = n;
            break;
        }
        if (options.contraction_every > 0 && n % options.contraction_every == 0) {
            const double err = std::abs(s.sum() - p.N - dev) / (p.N + std::abs(dev0));
            out.contraction_error = std::max(out.contraction_error, err);
            if (err > options.contraction_tolerance) {
                throw NumericalBlowup("iterate: population contraction violated", n);
            }
        }
        if (n > n_transient) {
            out.samples.push_back(s);
        }
    }
    out.final_state = s;
    if (out.diverged) {
        out.period.kind = PeriodKind::Diverged;
        return out;
    }
    if (out.samples.empty()) {
        return out;
    }

    const double tol = options.recurrence_tolerance * p.N;
    out.period = detect_period(out.samples, tol, options.max_period);
    if (out.period.kind != PeriodKind::Periodic && out.samples.size() >= 4) {
        const double loose = 1e-3 * p.N;
        const int limit = std::min<int>(options.max_period, static_cast<int>(out.samples.size() / 2));
        for (int m = 1; m <= limit; ++m) {
            if (recurrence_residual(out.samples, m, loose) >= loose) {
                continue;
            }
            if (auto confirmed = confirm_cycle(p, out.samples, m, loose)) {
                out.period = *confirmed;
                break;
            }
        }
    }

    const bool at_rest = out.period.kind == PeriodKind::Periodic && out.period.period == 1;
    if (!at_rest && p.alpha > p.beta + p.r) {
        try {
            out.rotation = rotation_number(p, out.samples, endemic_point(p));
        } catch (const std::exception&) {
            out.rotation.reset();
        }
    }
    return out;
}

PeriodVerdict detect_period(const std::vector<State3>& samples, double tol, int max_period)
{
    PeriodVerdict out;
    const int n = static_cast<int>(samples.size());
    if (n < 2) {
        return out;
    }
    const int limit = std::min(max_period, n / 2);
    for (int m = 1; m <= limit; ++m) {
        const double worst = recurrence_residual(samples, m, tol);
        if (worst < tol) {
            out.kind = PeriodKind::Periodic;
            out.period = m;
            out.residual = worst;
            return out;
        }
    }
    if (n < 64) {
        return out;
    }
    const int take = std::min(n, 2048);
    std::vector<Vec3> all, quarter;
    all.reserve(take);
    for (int i = n - take; i < n; ++i) {
        all.push_back(samples[i].vec());
        if ((i - (n - take)) % 4 == 0) {
            quarter.push_back(samples[i].vec());
        }
    }
    const double d_all = mean_nearest_neighbour(all);
    const double d_quarter = mean_nearest_neighbour(quarter);
    if (d_all > 0.0 && d_quarter / d_all > 3.0) {
        out.kind = PeriodKind::Quasiperiodic;
    }
    return out;
}

RotationEstimate rotation_number(const Params& p, const std::vector<State3>& samples, const State3& center)
{
    if (samples.size() < 2) {
        throw InvalidInput("rotation_number: need at least two samples");
    }
    const Eigen::Vector3cd l = eigenplane_projector(p, center);
    const double floor = 1e-12 * (1.0 + norm(center));
    cplx prev = project(l, samples.front(), center);
    if (std::abs(prev) < floor) {
        throw DomainError("rotation_number: sample collapses onto the center");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const cplx w = project(l, samples[i], center);
        if (std::abs(w) < floor) {
            throw DomainError("rotation_number: sample collapses onto the center");
        }
        total += std::arg(w / prev);
        prev = w;
    }
    RotationEstimate out;
    out.value = total / (2.0 * std::numbers::pi * static_cast<double>(samples.size() - 1));
    for (int q = 1; q <= 50; ++q) {
        const double pn = std::round(out.value * q);
        if (std::abs(out.value - pn / q) < 1e-4) {
            out.lock = std::make_pair(static_cast<int>(pn), q);
            break;
        }
    }
    return out;
}

std::vector<SweepRecord> sweep_bifurcation(const Params& base, SweepParam which, double lo, double hi, int steps,
                                           const SweepOptions& options)
{
    if (steps < 2) {
        throw InvalidInput("sweep_bifurcation: steps must be at least 2");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidInput("sweep_bifurcation: non-finite range");
    }
    std::vector<SweepRecord> records(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        auto& rec = records[static_cast<std::size_t>(i)];
        rec.value = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        rec.params = base;
        set_param(rec.params, which, rec.value);
    }

    auto run_one = [&](SweepRecord& rec, const State3& seed) {
        try {
            rec.orbit = iterate(rec.params, seed, options.n_transient, options.n_keep, options.iterate);
        } catch (const std::exception& e) {
            rec.orbit.reset();
            rec.error = e.what();
        }
    };

    if (options.seed_policy == SeedPolicy::Inherit) {
        std::optional<State3> carried;
        for (auto& rec : records) {
            State3 seed = options.seed ? *options.seed : default_seed(rec.params);
            if (carried) {
                seed = *carried;
            }
            run_one(rec, seed);
            carried.reset();
            if (rec.orbit && !rec.orbit->diverged) {
                State3 next = rec.orbit->final_state;
                if (rec.orbit->period.kind == PeriodKind::Periodic && rec.orbit->period.period == 1) {
                    // Leave the fixed point so a newly unstable one is not shadowed.
                    const double kick = 1e-3 * rec.params.N;
                    next.x += kick;
                    next.y -= kick;
                }
                carried = next;
            }
        }
        return records;
    }

    const int workers = std::max(1, std::min(options.threads, steps));
    auto worker = [&](int id) {
        for (int i = id; i < steps; i += workers) {
            auto& rec = records[static_cast<std::size_t>(i)];
            run_one(rec, options.seed ? *options.seed : default_seed(rec.params));
        }
    };
    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int id = 0; id < workers; ++id) {
            pool.emplace_back(worker, id);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return records;
}

SweepParam parse_sweep_param(const std::string& name)
{
    if (name == "N") return SweepParam::N;
    if (name == "beta") return SweepParam::Beta;
    if (name == "r") return SweepParam::R;
    if (name == "alpha") return SweepParam::Alpha;
    throw InvalidInput("unknown sweep parameter '" + name + "' (expected N, beta, r or alpha)");
}

std::string to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::N: return "N";
    case SweepParam::Beta: return "beta";
    case SweepParam::R: return "r";
    case SweepParam::Alpha: return "alpha";
    }
    return "unknown";
}

SeedFate seed_fate(const Params& p, const State3& seed, std::size_t horizon, const ProbeOptions& options)
{
    if (!seed.finite()) {
        throw InvalidInput("seed_fate: non-finite seed");
    }
    if (!(p.alpha > p.beta + p.r)) {
        throw PreconditionError("seed_fate: E2 does not exist");
    }
    const State3 e2 = endemic_point(p);
    const Eigen::Vector3cd l = eigenplane_projector(p, e2);
    const MultiplierSet ms = multipliers_E2(p);
    const bool e2_stable = std::abs(ms.t1) < 1.0;

    SeedFate fate;
    fate.seed = seed;
    const cplx w0 = project(l, seed, e2);
    fate.initial_radius = std::abs(w0);
    fate.initial_angle = std::arg(w0);

    const double limit = 1e6 * p.N;
    const double fixed_radius = options.fixed_point_radius * p.N;
    const std::size_t window = std::max<std::size_t>(options.window, 16);
    const int bins = std::max(options.bins, 4);
    const int early_stop = 8 * options.settle_windows;

    State3 s = seed;
    const double dev0 = seed.sum() - p.N;
    double dev = dev0;
    double prev_min = -1.0, prev_max = -1.0;
    double prev_change = 0.0;
    int settled = 0;
    bool sign_flip = false;
    std::vector<double> pmin(bins), pmax(bins);
    std::size_t step = 0;
    while (step < horizon) {
        const bool profile = settled > 0;
        if (profile) {
            std::fill(pmin.begin(), pmin.end(), std::numeric_limits<double>::infinity());
            std::fill(pmax.begin(), pmax.end(), 0.0);
        }
        double wmin = std::numeric_limits<double>::infinity();
        double wmax = 0.0;
        const std::size_t end = std::min(horizon, step + window);
        for (; step < end; ++step) {
            s = map_step(p, s);
            dev *= 1.0 - p.beta;
            if (!s.finite()) {
                throw NumericalBlowup("seed_fate: non-finite state", step + 1);
            }
            if ((step + 1) % 1000 == 0) {
                const double err = std::abs(s.sum() - p.N - dev) / (p.N + std::abs(dev0));
                fate.contraction_error = std::max(fate.contraction_error, err);
            }
            if (std::abs(s.x) + std::abs(s.y) + std::abs(s.z) > limit) {
                fate.kind = SeedFateKind::Diverged;
                fate.steps = step + 1;
                return fate;
            }
            const cplx w = project(l, s, e2);
            const double rad = std::abs(w);
            wmin = std::min(wmin, rad);
            wmax = std::max(wmax, rad);
            if (profile) {
                const double turn = (std::arg(w) + std::numbers::pi) / (2.0 * std::numbers::pi);
                const int b = std::min(bins - 1, static_cast<int>(turn * bins));
                pmin[b] = std::min(pmin[b], rad);
                pmax[b] = std::max(pmax[b], rad);
            }
        }
        fate.steps = step;
        if (e2_stable && wmax < fixed_radius) {
            fate.kind = SeedFateKind::ToFixedPoint;
            return fate;
        }
        if (end - (end > window ? end - window : 0) < window) {
            break;  // partial final window
        }
        const bool away = wmin > fixed_radius;
        if (prev_max > 0.0 && away) {
            const double change = std::max(std::abs(wmax - prev_max), std::abs(wmin - prev_min)) / wmax;
            const double signed_change = wmax - prev_max;
            if (change < options.settle_tolerance) {
                if (settled > 0 && signed_change * prev_change < 0.0) {
                    sign_flip = true;
                }
                ++settled;
            } else {
                settled = 0;
                sign_flip = false;
            }
            prev_change = signed_change;
        } else {
            settled = 0;
            sign_flip = false;
        }
        prev_min = wmin;
        prev_max = wmax;
        if (profile && settled >= options.settle_windows) {
            fate.circle_min = wmin;
            fate.circle_max = wmax;
            fate.profile_min = pmin;
            fate.profile_max = pmax;
            if (settled >= early_stop && sign_flip) {
                fate.kind = SeedFateKind::ToCircle;
                return fate;
            }
        }
    }
    if (settled >= options.settle_windows && !fate.profile_min.empty()) {
        fate.kind = SeedFateKind::ToCircle;
    } else {
        fate.kind = SeedFateKind::Unresolved;
        fate.profile_min.clear();
        fate.profile_max.clear();
    }
    return fate;
}

CircleProbe probe_invariant_circle(const Params& p, const std::vector<State3>& seeds, std::size_t horizon,
                                   const ProbeOptions& options)
{
    CircleProbe probe;
    for (const auto& s : seeds) {
        probe.fates.push_back(seed_fate(p, s, horizon, options));
    }
    const auto count = [&](SeedFateKind k) {
        return std::count_if(probe.fates.begin(), probe.fates.end(), [k](const SeedFate& f) { return f.kind == k; });
    };
    if (count(SeedFateKind::Unresolved) > 0) {
        probe.verdict = CircleVerdict::Inconclusive;
        probe.explanation = "at least one seed was unresolved within the horizon";
        return probe;
    }

    const SeedFate* circle = nullptr;
    for (const auto& f : probe.fates) {
        if (f.kind != SeedFateKind::ToCircle) {
            continue;
        }
        if (!circle) {
            circle = &f;
        } else if (std::abs(f.circle_max - circle->circle_max) > 1e-3 * circle->circle_max
                   || std::abs(f.circle_min - circle->circle_min) > 1e-3 * circle->circle_max) {
            probe.verdict = CircleVerdict::Inconclusive;
            probe.explanation = "seeds settled on different circles";
            return probe;
        }
    }

    if (!circle) {
        const auto fixed = count(SeedFateKind::ToFixedPoint);
        const auto gone = count(SeedFateKind::Diverged);
        if (gone == 0) {
            probe.verdict = CircleVerdict::NoCircle;
            probe.explanation = "every seed converged to E2";
            return probe;
        }
        if (fixed > 0) {
            double inner = 0.0, outer = std::numeric_limits<double>::infinity();
            for (const auto& f : probe.fates) {
                if (f.kind == SeedFateKind::ToFixedPoint) {
                    inner = std::max(inner, f.initial_radius);
                } else {
                    outer = std::min(outer, f.initial_radius);
                }
            }
            if (inner < outer) {
                probe.verdict = CircleVerdict::Unstable;
                probe.explanation = "inner seeds converge to E2 and outer seeds diverge";
                return probe;
            }
        }
        probe.verdict = CircleVerdict::Inconclusive;
        probe.explanation = "no circle observed and seed fates do not separate by radius";
        return probe;
    }

    const int bins = static_cast<int>(circle->profile_min.size());
    auto position = [&](const SeedFate& f) {
        const double turn = (f.initial_angle + std::numbers::pi) / (2.0 * std::numbers::pi);
        const int b = std::min(bins - 1, static_cast<int>(turn * bins));
        double lo = circle->profile_min[b];
        double hi = circle->profile_max[b];
        if (!std::isfinite(lo) || hi <= 0.0) {
            lo = circle->circle_min;
            hi = circle->circle_max;
        }
        if (f.initial_radius < lo) return -1;
        if (f.initial_radius > hi) return 1;
        return 0;
    };

    bool from_inside = false, from_outside = false, outside_diverged = false, inside_fixed = false;
    double outside_circle_radius = 0.0;
    double outside_diverged_radius = std::numeric_limits<double>::infinity();
    for (const auto& f : probe.fates) {
        const int pos = position(f);
        if (f.kind == SeedFateKind::ToCircle) {
            from_inside |= pos < 0;
            if (pos > 0) {
                from_outside = true;
                outside_circle_radius = std::max(outside_circle_radius, f.initial_radius);
            }
        } else if (f.kind == SeedFateKind::Diverged && pos > 0) {
            outside_diverged = true;
            outside_diverged_radius = std::min(outside_diverged_radius, f.initial_radius);
        } else if (f.kind == SeedFateKind::ToFixedPoint && pos < 0) {
            inside_fixed = true;
        }
    }

    if (from_inside && from_outside && outside_diverged && outside_circle_radius < outside_diverged_radius) {
        probe.verdict = CircleVerdict::TwoCircles;
        probe.explanation = "a circle attracts from both sides and a seed further out escapes";
    } else if (from_inside && from_outside && !outside_diverged) {
        probe.verdict = CircleVerdict::Stable;
        probe.explanation = "the circle attracts from both sides";
    } else if (from_inside && !from_outside && outside_diverged) {
        probe.verdict = CircleVerdict::OutsideUnstableInsideStable;
        probe.explanation = "the circle attracts from inside and an outside seed escapes";
    } else if (from_outside && !from_inside && inside_fixed) {
        probe.verdict = CircleVerdict::OutsideStableInsideUnstable;
        probe.explanation = "the circle attracts from outside and an inside seed falls to E2";
    } else {
        probe.verdict = CircleVerdict::Inconclusive;
        probe.explanation = "seed fates do not match a circle configuration";
    }
    return probe;
}

R4RegionProbe probe_r4_region(const Params& at_r4, double radius, int directions)
{
    R4RegionProbe out;
    IterateOptions it;
    it.max_period = 8;
    for (int k = 0; k < directions; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / directions;
        Params q = at_r4;
        q.r = at_r4.r * (1.0 + radius * std::cos(phi));
        q.alpha = at_r4.alpha * (1.0 + radius * std::sin(phi));
        if (!(q.alpha > q.beta + q.r) || !q.biological()) {
            continue;
        }
        const MultiplierSet ms = multipliers_E2(q);
        if (!(std::abs(ms.t1) > 1.0)) {
            continue;
        }
        ++out.directions;
        const State3 e = endemic_point(q);
        const double kick = 1e-4 * q.N;
        try {
            const OrbitSummary orbit = iterate(q, {e.x + kick, e.y - kick, e.z}, 200000, 2048, it);
            if (orbit.diverged) {
                ++out.diverged_directions;
            } else if (orbit.period.kind == PeriodKind::Periodic && orbit.period.period == 4) {
                ++out.locked_directions;
            } else if (orbit.period.kind == PeriodKind::Quasiperiodic) {
                ++out.circle_directions;
            } else {
                ++out.other_directions;
            }
        } catch (const std::exception&) {
            ++out.other_directions;
        }
    }
    out.region_two = out.directions > 0 && out.diverged_directions == 0 && out.other_directions == 0
                     && out.locked_directions > 0 && out.circle_directions > 0;
    out.summary = std::to_string(out.directions) + " unstable directions: " + std::to_string(out.circle_directions)
                  + " circle, " + std::to_string(out.locked_directions) + " period-4, "
                  + std::to_string(out.diverged_directions) + " diverged, " + std::to_string(out.other_directions)
                  + " other";
    return out;
}

std::string to_string(PeriodKind k)
{
    switch (k) {
    case PeriodKind::Periodic: return "periodic";
    case PeriodKind::Quasiperiodic: return "quasiperiodic";
    case PeriodKind::Aperiodic: return "aperiodic";
    case PeriodKind::Diverged: return "diverged";
    }
    return "unknown";
}

std::string to_string(SeedFateKind k)
{
    switch (k) {
    case SeedFateKind::ToFixedPoint: return "to_fixed_point";
    case SeedFateKind::ToCircle: return "to_circle";
    case SeedFateKind::Diverged: return "diverged";
    case SeedFateKind::Unresolved: return "unresolved";
    }
    return "unknown";
}

std::string to_string(CircleVerdict v)
{
    switch (v) {
    case CircleVerdict::NoCircle: return "no_circle";
    case CircleVerdict::Stable: return "stable";
    case CircleVerdict::Unstable: return "unstable";
    case CircleVerdict::OutsideUnstableInsideStable: return "outside_unstable_inside_stable";
    case CircleVerdict::OutsideStableInsideUnstable: return "outside_stable_inside_unstable";
    case CircleVerdict::TwoCircles: return "two_circles";
    case CircleVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace sirbif
