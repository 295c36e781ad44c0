#pragma once

#include "sirbif/dynamics.hpp"
#include "sirbif/model.hpp"
#include "sirbif/normal_forms.hpp"

#include <array>
#include <string>
#include <vector>

namespace sirbif {

enum class EventKind { BP, PD, NS, R2, R3, R4, CH };

struct CurvePoint {
    Params params;
    State3 state;
    std::array<cplx, 3> multipliers{};
    std::vector<double> test_values;  // ordered as ContinuationCurve::test_names
};

struct ContinuationEvent {
    EventKind kind = EventKind::BP;
    Params params;
    State3 state;
    double residual = 0.0;  // width of the final bisection bracket
    std::array<double, 4> tangent{};  // (dx, dy, dz, dlambda) of the curve at the event
    std::string note;
};

struct ContinuationCurve {
    SweepParam active = SweepParam::Alpha;
    std::vector<std::string> test_names;
    std::vector<CurvePoint> points;
    std::vector<ContinuationEvent> events;
    std::vector<std::string> diagnostics;
    bool truncated = false;
    double max_locus_disagreement = 0.0;  // NS curves only
};

struct StepControl {
    double initial = 1e-3;  // all step sizes are fractions of |hi - lo|
    double min = 1e-6;
    double max = 1e-2;
    int max_points = 20000;
    int newton_max_iter = 12;
    double newton_tolerance = 1e-10;
    double event_tolerance = 1e-10;
};

// Pseudo-arclength continuation of F(s; lambda) = s in the active parameter,
// starting from `start` (refined by Newton at p0) and heading towards `hi`
// (or `lo` when p0 already sits at hi).  Test functions det(J - I),
// det(J + I) and t1 t2 - 1 are monitored; sign changes become events.
ContinuationCurve continue_fixed_points(const Params& p0, SweepParam active, const State3& start, double lo,
                                        double hi, const StepControl& control = {});

// Continues the second branch through a BP event.  The new tangent solves
// the algebraic branching equation built from the quadratic terms.
ContinuationCurve switch_branch(const ContinuationEvent& bp, SweepParam active, double lo, double hi,
                                const StepControl& control = {});

struct NsCurveOptions {
    int points_per_unit = 4000;  // r samples per unit length
    double agreement = 1e-9;     // |alpha_generic - Psi3| <= agreement (1 + |alpha|)
    double pole_gap = 1e-6;      // excluded half-width around beta + r = 1
    double event_tolerance = 1e-13;  // bracket width in r; alpha moves ~|dPsi3/dr| times this
};

// Traces alpha = Psi3(beta, r) over [r_lo, r_hi] and, independently, by
// Newton on (F(s) - s, t1 t2 - 1) in (x, y, z, alpha).  R2/R3/R4 are found
// where t1 + t2 = 2 cos(arg t1) crosses -2, -1, 0; CH where the first
// Lyapunov quantity changes sign.
ContinuationCurve continue_ns_curve(double N, double beta, double r_lo, double r_hi, const NsCurveOptions& options = {});

// Closed-form coefficients next to the reduction-oracle values at an R3, R4
// or CH event, with sign and 1e-4 relative agreement checks.
NormalFormReport codim2_diagnostics(const ContinuationEvent& event, double N);

std::string to_string(EventKind k);

}  // namespace sirbif
