#include "sirbif/continuation.hpp"

#include "sirbif/errors.hpp"
#include "sirbif/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace sirbif {
namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

double& param_ref(Params& p, SweepParam which)
{
    switch (which) {
    case SweepParam::N: return p.N;
    case SweepParam::Beta: return p.beta;
    case SweepParam::R: return p.r;
    case SweepParam::Alpha: return p.alpha;
    }
    return p.alpha;
}

double param_value(const Params& p, SweepParam which)
{
    Params q = p;
    return param_ref(q, which);
}

Vec3 dF_dparam(const Params& p, const State3& s, SweepParam which)
{
    const double xy = s.x * s.y;
    switch (which) {
    case SweepParam::Alpha: return {-xy / p.N, xy / p.N, 0.0};
    case SweepParam::Beta: return {p.N - s.x, -s.y, -s.z};
    case SweepParam::R: return {0.0, -s.y, s.y};
    case SweepParam::N: {
        const double t = p.alpha * xy / (p.N * p.N);
        return {t + p.beta, -t, 0.0};
    }
    }
    return Vec3::Zero();
}

// Fixed-point problem G(u) = F(s; lambda) - s with u = (x, y, z, lambda).
struct FixedPointProblem {
    Params base;
    SweepParam active;

    Params params_at(const Vec4& u) const
    {
        Params p = base;
        param_ref(p, active) = u(3);
        return p;
    }
    static State3 state_of(const Vec4& u) { return {u(0), u(1), u(2)}; }

    Vec3 residual(const Vec4& u) const
    {
        const State3 s = state_of(u);
        return map_step(params_at(u), s).vec() - s.vec();
    }

    Mat34 jacobian(const Vec4& u) const
    {
        const Params p = params_at(u);
        const State3 s = state_of(u);
        Mat34 d;
        d.leftCols<3>() = jacobian_at(p, s) - Mat3::Identity();
        d.col(3) = dF_dparam(p, s, active);
        return d;
    }
};

Vec4 pack(const State3& s, double lambda)
{
    return {s.x, s.y, s.z, lambda};
}

// Tangent of the solution curve: kernel of DG oriented along `previous`.
Vec4 tangent_at(const FixedPointProblem& prob, const Vec4& u, const Vec4& previous)
{
    Mat4 a;
    a.topRows<3>() = prob.jacobian(u);
    a.row(3) = previous.transpose();
    Vec4 rhs = Vec4::Zero();
    rhs(3) = 1.0;
    Vec4 t = a.fullPivLu().solve(rhs);
    if (!t.allFinite() || t.norm() == 0.0) {
        return previous;
    }
    t.normalize();
    if (t.dot(previous) < 0.0) {
        t = -t;
    }
    return t;
}

struct Corrected {
    Vec4 u;
    int iterations = 0;
};

std::optional<Corrected> correct(const FixedPointProblem& prob, const Vec4& predicted, const Vec4& t,
                                 const StepControl& control)
{
    Vec4 u = predicted;
    for (int it = 1; it <= control.newton_max_iter; ++it) {
        Vec4 h;
        h.head<3>() = prob.residual(u);
        h(3) = t.dot(u - predicted);
        if (!h.allFinite()) {
            return std::nullopt;
        }
        Mat4 a;
        a.topRows<3>() = prob.jacobian(u);
        a.row(3) = t.transpose();
        const Vec4 du = a.fullPivLu().solve(-h);
        if (!du.allFinite()) {
            return std::nullopt;
        }
        u += du;
        if (du.norm() <= control.newton_tolerance * (1.0 + u.norm())
            && prob.residual(u).norm() <= control.newton_tolerance) {
            return Corrected{u, it};
        }
    }
    return std::nullopt;
}

// Newton in the state only, the parameter held fixed.
std::optional<State3> settle_state(const Params& p, const State3& guess, double tol, int max_iter = 30)
{
    State3 s = guess;
    for (int it = 0; it < max_iter; ++it) {
        const Vec3 g = map_step(p, s).vec() - s.vec();
        if (!g.allFinite()) {
            return std::nullopt;
        }
        if (g.norm() <= tol) {
            return s;
        }
        const Vec3 ds = (jacobian_at(p, s) - Mat3::Identity()).fullPivLu().solve(-g);
        if (!ds.allFinite()) {
            return std::nullopt;
        }
        s = State3::from(s.vec() + ds);
    }
    const Vec3 g = map_step(p, s).vec() - s.vec();
    if (g.norm() <= tol) {
        return s;
    }
    return std::nullopt;
}

// Sign change from fa to fb, counting an exact zero at fb (not at fa, which
// the previous interval already reported).
bool crosses(double fa, double fb)
{
    return std::isfinite(fa) && std::isfinite(fb) && fa != 0.0 && (fb == 0.0 || (fa < 0.0) != (fb < 0.0));
}

std::array<cplx, 3> sorted_multipliers(const Mat3& j)
{
    Eigen::EigenSolver<Mat3> es(j, false);
    std::array<cplx, 3> m{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
    std::sort(m.begin(), m.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return m;
}

// Product and sum of the two multipliers other than 1 - beta.
struct PlanePair {
    double sum = 0.0;
    double product = 0.0;
    bool complex() const { return sum * sum - 4.0 * product < 0.0; }
};

PlanePair plane_pair(const Params& p, const Mat3& j)
{
    const double lz = 1.0 - p.beta;
    PlanePair out;
    out.sum = j.trace() - lz;
    out.product = guarded_div(j.determinant(), lz, "t1 t2 = det J / (1 - beta)");
    return out;
}

const std::vector<std::string> kFixedPointTests = {"det(J-I)", "det(J+I)", "t1*t2-1"};

std::vector<double> fixed_point_tests(const Params& p, const Mat3& j)
{
    return {(j - Mat3::Identity()).determinant(), (j + Mat3::Identity()).determinant(),
            plane_pair(p, j).product - 1.0};
}

CurvePoint make_point(const FixedPointProblem& prob, const Vec4& u)
{
    CurvePoint pt;
    pt.params = prob.params_at(u);
    pt.state = FixedPointProblem::state_of(u);
    const Mat3 j = jacobian_at(pt.params, pt.state);
    pt.multipliers = sorted_multipliers(j);
    pt.test_values = fixed_point_tests(pt.params, j);
    return pt;
}

// Bisection in the parameter between two curve points on which test `index`
// changes sign.
ContinuationEvent locate_fixed_point_event(const FixedPointProblem& prob, const CurvePoint& a, const CurvePoint& b,
                                           int index, EventKind kind, const Vec4& tangent,
                                           const StepControl& control)
{
    double la = param_value(a.params, prob.active);
    double lb = param_value(b.params, prob.active);
    double fa = a.test_values[index];
    State3 sa = a.state;
    State3 sb = b.state;
    Params p = prob.base;
    State3 s_mid = sa;
    int guard = 0;
    while (std::abs(lb - la) > control.event_tolerance && guard++ < 200) {
        const double lm = 0.5 * (la + lb);
        param_ref(p, prob.active) = lm;
        const State3 guess = State3::from(0.5 * (sa.vec() + sb.vec()));
        const auto s = settle_state(p, guess, control.newton_tolerance);
        if (!s) {
            break;
        }
        const double fm = fixed_point_tests(p, jacobian_at(p, *s))[index];
        s_mid = *s;
        if ((fm < 0.0) == (fa < 0.0) && fm != 0.0) {
            la = lm;
            fa = fm;
            sa = *s;
        } else {
            lb = lm;
            sb = *s;
        }
    }
    ContinuationEvent ev;
    ev.kind = kind;
    ev.params = p;
    param_ref(ev.params, prob.active) = 0.5 * (la + lb);
    ev.state = settle_state(ev.params, s_mid, control.newton_tolerance).value_or(s_mid);
    ev.residual = std::abs(lb - la);
    for (int i = 0; i < 4; ++i) {
        ev.tangent[static_cast<std::size_t>(i)] = tangent(i);
    }
    return ev;
}

void detect_fixed_point_events(const FixedPointProblem& prob, const CurvePoint& a, const CurvePoint& b,
                               const Vec4& tangent, const StepControl& control, ContinuationCurve& curve)
{
    const EventKind kinds[] = {EventKind::BP, EventKind::PD, EventKind::NS};
    for (int i = 0; i < 3; ++i) {
        const double fa = a.test_values[i];
        const double fb = b.test_values[i];
        if (!crosses(fa, fb)) {
            continue;
        }
        ContinuationEvent ev = locate_fixed_point_event(prob, a, b, i, kinds[i], tangent, control);
        if (kinds[i] == EventKind::NS) {
            const PlanePair pair = plane_pair(ev.params, jacobian_at(ev.params, ev.state));
            if (!pair.complex()) {
                curve.diagnostics.push_back("neutral saddle (real multipliers with product 1) skipped at "
                                            + to_string(prob.active) + " = "
                                            + std::to_string(param_value(ev.params, prob.active)));
                continue;
            }
        }
        curve.events.push_back(ev);
    }
}

ContinuationCurve trace(const FixedPointProblem& prob, Vec4 u, Vec4 t, double lo, double hi,
                        const StepControl& control)
{
    ContinuationCurve curve;
    curve.active = prob.active;
    curve.test_names = kFixedPointTests;
    curve.points.push_back(make_point(prob, u));

    const double scale = std::max(std::abs(hi - lo), 1e-12);
    const double h_min = control.min * scale;
    const double h_max = control.max * scale;
    const double slack = 1e-12 * scale;
    double h = std::clamp(control.initial * scale, h_min, h_max);

    while (static_cast<int>(curve.points.size()) < control.max_points) {
        const Vec4 predicted = u + h * t;
        auto corrected = correct(prob, predicted, t, control);
        if (corrected && (corrected->u - predicted).norm() > 2.0 * h) {
            corrected.reset();
        }
        if (!corrected) {
            h *= 0.5;
            if (h < h_min) {
                if (curve.points.size() == 1) {
                    throw ContinuationError("continue_fixed_points: step floor reached before the first step");
                }
                curve.truncated = true;
                curve.diagnostics.push_back("corrector diverged at the minimum step; curve truncated at "
                                            + to_string(prob.active) + " = " + std::to_string(u(3)));
                break;
            }
            continue;
        }
        const Vec4 u_new = corrected->u;
        if (u_new(3) < lo - slack || u_new(3) > hi + slack) {
            // Close the curve exactly on the interval edge it crossed.
            const double edge = u_new(3) > hi ? hi : lo;
            if (std::abs(u(3) - edge) > slack) {
                const double f = (edge - u(3)) / (u_new(3) - u(3));
                Vec4 guess = u + f * (u_new - u);
                guess(3) = edge;
                if (auto s = settle_state(prob.params_at(guess), FixedPointProblem::state_of(guess),
                                          control.newton_tolerance)) {
                    guess.head<3>() = s->vec();
                    CurvePoint pt = make_point(prob, guess);
                    detect_fixed_point_events(prob, curve.points.back(), pt, t, control, curve);
                    curve.points.push_back(std::move(pt));
                }
            }
            break;
        }
        const Vec4 t_new = tangent_at(prob, u_new, t);
        CurvePoint pt = make_point(prob, u_new);
        detect_fixed_point_events(prob, curve.points.back(), pt, t, control, curve);
        curve.points.push_back(std::move(pt));
        u = u_new;
        t = t_new;
        if (corrected->iterations <= 3) {
            h = std::min(h * 1.5, h_max);
        } else if (corrected->iterations > 6) {
            h = std::max(h * 0.7, h_min);
        }
    }
    if (static_cast<int>(curve.points.size()) >= control.max_points) {
        curve.truncated = true;
        curve.diagnostics.push_back("maximum number of points reached");
    }
    return curve;
}

double first_lyapunov_or_nan(double N, double beta, double r)
{
    try {
        return ns_first_lyapunov(N, beta, r).coefficient("A").real();
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

struct NsSample {
    double r = 0.0;
    double alpha = 0.0;
    State3 state;
    double pair_sum = 0.0;
    double lyapunov = 0.0;
};

NsSample ns_sample(double N, double beta, double r)
{
    NsSample s;
    s.r = r;
    s.alpha = ns_alpha(beta, r);
    s.pair_sum = std::numeric_limits<double>::quiet_NaN();
    s.lyapunov = std::numeric_limits<double>::quiet_NaN();
    if (!(s.alpha > beta + r)) {
        return s;
    }
    const Params p{N, beta, r, s.alpha};
    s.state = endemic_point(p);
    s.pair_sum = plane_pair(p, jacobian_at(p, s.state)).sum;
    s.lyapunov = first_lyapunov_or_nan(N, beta, r);
    return s;
}

// Newton in (x, y, z, alpha) on F(s) - s = 0 and t1 t2 - 1 = 0.
std::optional<Vec4> generic_ns_point(double N, double beta, double r, const Vec4& guess)
{
    auto equations = [&](const Vec4& u) {
        const Params p{N, beta, r, u(3)};
        const State3 s{u(0), u(1), u(2)};
        Vec4 e;
        e.head<3>() = map_step(p, s).vec() - s.vec();
        e(3) = plane_pair(p, jacobian_at(p, s)).product - 1.0;
        return e;
    };
    Vec4 u = guess;
    for (int it = 0; it < 40; ++it) {
        const Vec4 e = equations(u);
        if (!e.allFinite()) {
            return std::nullopt;
        }
        Mat4 a;
        for (int k = 0; k < 4; ++k) {
            const double step = 1e-6 * (1.0 + std::abs(u(k)));
            Vec4 up = u, dn = u;
            up(k) += step;
            dn(k) -= step;
            a.col(k) = (equations(up) - equations(dn)) / (2.0 * step);
        }
        const Vec4 du = a.fullPivLu().solve(-e);
        if (!du.allFinite()) {
            return std::nullopt;
        }
        u += du;
        if (du.norm() <= 1e-14 * (1.0 + u.norm())) {
            break;
        }
    }
    if (equations(u).norm() > 1e-11 * (1.0 + u.norm())) {
        return std::nullopt;
    }
    return u;
}

ContinuationEvent locate_ns_event(double N, double beta, double ra, double rb, EventKind kind,
                                  const std::function<double(const NsSample&)>& f, double tol)
{
    double fa = f(ns_sample(N, beta, ra));
    int guard = 0;
    while (std::abs(rb - ra) > tol && guard++ < 200) {
        const double rm = 0.5 * (ra + rb);
        const double fm = f(ns_sample(N, beta, rm));
        if ((fm < 0.0) == (fa < 0.0) && fm != 0.0) {
            ra = rm;
            fa = fm;
        } else {
            rb = rm;
        }
    }
    const NsSample at = ns_sample(N, beta, 0.5 * (ra + rb));
    ContinuationEvent ev;
    ev.kind = kind;
    ev.params = {N, beta, at.r, at.alpha};
    ev.state = at.state;
    ev.residual = std::abs(rb - ra);
    ev.tangent = {0.0, 0.0, 1.0, 0.0};
    return ev;
}

void trace_ns_segment(double N, double beta, double lo, double hi, const NsCurveOptions& options,
                      ContinuationCurve& curve)
{
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) * options.points_per_unit)) + 1);
    NsSample prev;
    bool has_prev = false;
    Vec4 generic = Vec4::Zero();
    bool has_generic = false;
    for (int i = 0; i < n; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        NsSample s = ns_sample(N, beta, r);
        if (!(s.alpha > beta + r)) {
            if (has_prev) {
                curve.diagnostics.push_back("NS locus leaves alpha > beta + r at r = " + std::to_string(r));
            }
            has_prev = false;
            has_generic = false;
            continue;
        }
        const Vec4 guess = has_generic ? generic : Vec4(s.state.x, s.state.y, s.state.z, s.alpha * (1.0 + 1e-3));
        const auto solved = generic_ns_point(N, beta, r, guess);
        if (!solved) {
            throw ContinuationError("continue_ns_curve: generic Newton failed at r = " + std::to_string(r));
        }
        generic = *solved;
        has_generic = true;
        const double gap = std::abs(generic(3) - s.alpha) / (1.0 + std::abs(s.alpha));
        curve.max_locus_disagreement = std::max(curve.max_locus_disagreement, gap);
        if (gap > options.agreement) {
            throw ContinuationError("continue_ns_curve: explicit and generic NS loci disagree at r = "
                                    + std::to_string(r));
        }

        CurvePoint pt;
        pt.params = {N, beta, r, s.alpha};
        pt.state = s.state;
        pt.multipliers = sorted_multipliers(jacobian_at(pt.params, pt.state));
        pt.test_values = {s.pair_sum, s.lyapunov, generic(3)};

        if (has_prev) {
            const std::pair<EventKind, double> resonances[] = {
                {EventKind::R2, -2.0}, {EventKind::R3, -1.0}, {EventKind::R4, 0.0}};
            for (const auto& [kind, level] : resonances) {
                const double fa = prev.pair_sum - level;
                const double fb = s.pair_sum - level;
                if (crosses(fa, fb)) {
                    const double lv = level;
                    curve.events.push_back(locate_ns_event(
                        N, beta, prev.r, r, kind, [lv](const NsSample& q) { return q.pair_sum - lv; },
                        options.event_tolerance));
                }
            }
            const double la = prev.lyapunov;
            const double lb = s.lyapunov;
            if (crosses(la, lb)) {
                ContinuationEvent ev = locate_ns_event(
                    N, beta, prev.r, r, EventKind::CH, [](const NsSample& q) { return q.lyapunov; },
                    options.event_tolerance);
                const double at = first_lyapunov_or_nan(N, beta, ev.params.r);
                if (std::abs(at) <= 1e-6 * std::max(std::abs(la), std::abs(lb))) {
                    if (ev.params.r >= 1.0) {
                        ev.note = "extended domain";
                    }
                    curve.events.push_back(ev);
                } else {
                    curve.diagnostics.push_back("first Lyapunov quantity jumps sign without vanishing near r = "
                                                + std::to_string(ev.params.r));
                }
            }
        }
        curve.points.push_back(std::move(pt));
        prev = s;
        has_prev = true;
    }
}

double relative_gap(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

void compare(NormalFormReport& rep, const std::string& name, double closed, double numeric)
{
    rep.coefficients.emplace_back("closed " + name, closed);
    rep.coefficients.emplace_back("oracle " + name, numeric);
    rep.checks.push_back({"closed " + name + " != 0", closed, closed != 0.0 && std::isfinite(closed)});
    rep.checks.push_back({"oracle " + name + " != 0", numeric, numeric != 0.0 && std::isfinite(numeric)});
    rep.checks.push_back({name + " sign agreement", closed * numeric, closed * numeric > 0.0});
    const double gap = relative_gap(closed, numeric);
    rep.checks.push_back({name + " relative agreement (1e-4)", gap, gap <= 1e-4});
}

}  // namespace

ContinuationCurve continue_fixed_points(const Params& p0, SweepParam active, const State3& start, double lo,
                                        double hi, const StepControl& control)
{
    if (!p0.finite() || !start.finite() || !std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw InvalidInput("continue_fixed_points: need finite input and lo < hi");
    }
    const double lambda0 = param_value(p0, active);
    if (lambda0 < lo || lambda0 > hi) {
        throw InvalidInput("continue_fixed_points: starting parameter outside [lo, hi]");
    }
    const auto s0 = settle_state(p0, start, control.newton_tolerance);
    if (!s0) {
        throw PreconditionError("continue_fixed_points: Newton did not converge from the supplied state");
    }
    const FixedPointProblem prob{p0, active};
    const Vec4 u0 = pack(*s0, lambda0);
    Vec4 guide = Vec4::Zero();
    guide(3) = lambda0 < hi ? 1.0 : -1.0;
    const Vec4 t0 = tangent_at(prob, u0, guide);
    return trace(prob, u0, t0, lo, hi, control);
}

ContinuationCurve switch_branch(const ContinuationEvent& bp, SweepParam active, double lo, double hi,
                                const StepControl& control)
{
    if (bp.kind != EventKind::BP) {
        throw InvalidInput("switch_branch: event is not a BP");
    }
    const FixedPointProblem prob{bp.params, active};
    const Vec4 u = pack(bp.state, param_value(bp.params, active));
    const Eigen::MatrixXd dg = prob.jacobian(u);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dg, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(2) <= 1e-6 * sv(0))) {
        throw PreconditionError("switch_branch: the fixed-point Jacobian has full rank at the event");
    }
    const Vec4 phi1 = svd.matrixV().col(2);
    const Vec4 phi2 = svd.matrixV().col(3);
    const Vec3 psi = svd.matrixU().col(2);

    // Central second differences are exact here because G is cubic in u.
    const double h = 1e-3 * (1.0 + u.norm());
    auto quad = [&](const Vec4& v) {
        const Vec3 g = prob.residual(u + h * v) - 2.0 * prob.residual(u) + prob.residual(u - h * v);
        return psi.dot(g) / (h * h);
    };
    const double a11 = quad(phi1);
    const double a22 = quad(phi2);
    const double a12 = 0.25 * (quad(phi1 + phi2) - quad(phi1 - phi2));
    const double disc = a12 * a12 - a11 * a22;
    if (disc < 0.0) {
        throw SingularityError("switch_branch: branching equation has no real directions");
    }
    std::array<Vec4, 2> dirs;
    const double root = std::sqrt(disc);
    if (std::abs(a11) >= std::abs(a22)) {
        dirs[0] = ((-a12 + root) / a11) * phi1 + phi2;
        dirs[1] = ((-a12 - root) / a11) * phi1 + phi2;
    } else {
        dirs[0] = phi1 + ((-a12 + root) / a22) * phi2;
        dirs[1] = phi1 + ((-a12 - root) / a22) * phi2;
    }
    const Vec4 old_t(bp.tangent[0], bp.tangent[1], bp.tangent[2], bp.tangent[3]);
    const double c0 = std::abs(dirs[0].normalized().dot(old_t.normalized()));
    const double c1 = std::abs(dirs[1].normalized().dot(old_t.normalized()));
    Vec4 t = (c0 < c1 ? dirs[0] : dirs[1]).normalized();
    const bool toward_hi = u(3) < hi;
    if ((t(3) < 0.0) == toward_hi && std::abs(t(3)) > 1e-12) {
        t = -t;
    }

    const double scale = std::max(std::abs(hi - lo), 1e-12);
    double step = std::clamp(control.initial * scale, control.min * scale, control.max * scale);
    for (;;) {
        const Vec4 predicted = u + step * t;
        if (auto c = correct(prob, predicted, t, control)) {
            ContinuationCurve curve = trace(prob, c->u, tangent_at(prob, c->u, t), lo, hi, control);
            curve.diagnostics.insert(curve.diagnostics.begin(), "branch switched at " + to_string(active) + " = "
                                                                     + std::to_string(u(3)));
            return curve;
        }
        step *= 0.5;
        if (step < control.min * scale) {
            throw ContinuationError("switch_branch: corrector failed on the new branch");
        }
    }
}

ContinuationCurve continue_ns_curve(double N, double beta, double r_lo, double r_hi, const NsCurveOptions& options)
{
    if (!(N > 0.0) || !(beta > 0.0 && beta < 1.0) || !std::isfinite(r_lo) || !std::isfinite(r_hi)
        || !(r_lo > 0.0) || !(r_lo < r_hi)) {
        throw InvalidInput("continue_ns_curve: need N > 0, 0 < beta < 1 and 0 < r_lo < r_hi");
    }
    ContinuationCurve curve;
    curve.active = SweepParam::R;
    curve.test_names = {"t1+t2", "first_lyapunov", "alpha_generic"};
    const double pole = 1.0 - beta;
    if (r_lo < pole && pole < r_hi) {
        curve.diagnostics.push_back("curve split at the pole beta + r = 1");
        trace_ns_segment(N, beta, r_lo, pole - options.pole_gap, options, curve);
        trace_ns_segment(N, beta, pole + options.pole_gap, r_hi, options, curve);
    } else {
        trace_ns_segment(N, beta, r_lo, r_hi, options, curve);
    }
    std::stable_sort(curve.events.begin(), curve.events.end(),
                     [](const ContinuationEvent& a, const ContinuationEvent& b) { return a.params.r < b.params.r; });
    return curve;
}

NormalFormReport codim2_diagnostics(const ContinuationEvent& event, double N)
{
    const Params& p = event.params;
    NormalFormReport rep;
    NormalFormReport closed;
    switch (event.kind) {
    case EventKind::R3: {
        closed = resonance13_coefficients(N, p.beta);
        const oracle::NumericNormalForm nf = oracle::numeric_normal_form(p, oracle::ResonanceTarget::Resonance3);
        compare(rep, "Re_c1", closed.coefficient("Re_c1").real(), nf.get("c1").real());
        compare(rep, "Rc", closed.coefficient("Rc").real(), nf.get("Rc").real());
        break;
    }
    case EventKind::R4: {
        closed = resonance14_coefficients(N, p.beta);
        const oracle::NumericNormalForm nf = oracle::numeric_normal_form(p, oracle::ResonanceTarget::Resonance4);
        compare(rep, "a0", closed.coefficient("a0").real(), nf.get("A").real());
        compare(rep, "b0", closed.coefficient("b0").real(), nf.get("A").imag());
        break;
    }
    case EventKind::CH: {
        closed = chenciner_L2(N, p.beta);
        const oracle::NumericNormalForm nf = oracle::numeric_normal_form(p, oracle::ResonanceTarget::Chenciner);
        compare(rep, "L2", closed.coefficient("L2").real(), nf.get("L2").real());
        break;
    }
    default:
        throw InvalidInput("codim2_diagnostics: event kind must be R3, R4 or CH");
    }
    rep.kind = closed.kind;
    rep.criticality = closed.criticality;
    rep.checks.insert(rep.checks.end(), closed.checks.begin(), closed.checks.end());
    rep.notes = closed.notes;
    return rep;
}

std::string to_string(EventKind k)
{
    switch (k) {
    case EventKind::BP: return "BP";
    case EventKind::PD: return "PD";
    case EventKind::NS: return "NS";
    case EventKind::R2: return "R2";
    case EventKind::R3: return "R3";
    case EventKind::R4: return "R4";
    case EventKind::CH: return "CH";
    }
    return "unknown";
}

}  // namespace sirbif
