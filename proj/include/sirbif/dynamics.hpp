#pragma once

#include "sirbif/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sirbif {

enum class PeriodKind { Periodic, Quasiperiodic, Aperiodic, Diverged };

struct PeriodVerdict {
    PeriodKind kind = PeriodKind::Aperiodic;
    int period = 0;          // valid when kind == Periodic
    double residual = 0.0;   // recurrence residual of the accepted period
};

struct RotationEstimate {
    double value = 0.0;
    std::optional<std::pair<int, int>> lock;  // (p, q) when within 1e-4 of p/q, q <= 50
};

struct IterateOptions {
    double divergence_factor = 1e6;   // diverged once |s| > factor * N
    std::size_t contraction_every = 1000;
    double contraction_tolerance = 1e-9;
    int max_period = 64;
    double recurrence_tolerance = 1e-8;  // scaled by N
};

struct OrbitSummary {
    std::vector<State3> samples;
    PeriodVerdict period;
    std::optional<RotationEstimate> rotation;
    double max_norm = 0.0;
    bool diverged = false;
    std::size_t diverged_at = 0;
    // Worst relative deviation from sum_n - N = (1-beta)^n (sum_0 - N).
    double contraction_error = 0.0;
    State3 final_state;
};

// Iterates the map n_transient + n_keep times, keeping the last n_keep
// states.  Period candidates are confirmed by Newton on F^m - id, and a
// rotation number is attached when E2 exists and the orbit is not a fixed
// point.  Throws NumericalBlowup on NaN.
OrbitSummary iterate(const Params& p, const State3& s0, std::size_t n_transient, std::size_t n_keep,
                     const IterateOptions& options = {});

// Smallest m <= max_period with max |s[i+m] - s[i]| < tol; otherwise
// quasiperiodic when the samples fill a curve (nearest-neighbour gaps scale
// like 1/n), else aperiodic.
PeriodVerdict detect_period(const std::vector<State3>& samples, double tol, int max_period = 64);

// Mean angular advance per step, in turns, of the projection of
// (sample - center) onto the complex eigenplane of JF(center).
RotationEstimate rotation_number(const Params& p, const std::vector<State3>& samples, const State3& center);

enum class SweepParam { N, Beta, R, Alpha };
enum class SeedPolicy { Inherit, Fixed };

struct SweepOptions {
    std::size_t n_transient = 10000;
    std::size_t n_keep = 512;
    SeedPolicy seed_policy = SeedPolicy::Inherit;
    std::optional<State3> seed;  // default: E2 (or E1) nudged by 1e-3 N
    int threads = 1;             // only used with SeedPolicy::Fixed
    IterateOptions iterate;
};

struct SweepRecord {
    double value = 0.0;
    Params params;
    std::optional<OrbitSummary> orbit;
    std::string error;  // set when the point failed
};

std::vector<SweepRecord> sweep_bifurcation(const Params& base, SweepParam which, double lo, double hi, int steps,
                                           const SweepOptions& options = {});

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

enum class SeedFateKind { ToFixedPoint, ToCircle, Diverged, Unresolved };

struct SeedFate {
    SeedFateKind kind = SeedFateKind::Unresolved;
    State3 seed;
    double initial_radius = 0.0;
    double initial_angle = 0.0;
    std::size_t steps = 0;
    // Radius band of the limiting circle in eigenplane coordinates.
    double circle_min = 0.0;
    double circle_max = 0.0;
    std::vector<double> profile_min;  // per angle bin, for inside/outside tests
    std::vector<double> profile_max;
    double contraction_error = 0.0;  // as in OrbitSummary, sampled every 1000 steps
};

enum class CircleVerdict {
    NoCircle,
    Stable,
    Unstable,
    OutsideUnstableInsideStable,
    OutsideStableInsideUnstable,
    TwoCircles,  // outer unstable, inner stable
    Inconclusive,
};

struct CircleProbe {
    std::vector<SeedFate> fates;
    CircleVerdict verdict = CircleVerdict::Inconclusive;
    std::string explanation;
};

struct ProbeOptions {
    std::size_t window = 1u << 16;
    int bins = 64;
    double settle_tolerance = 1e-6;  // relative change of the radius band per window
    int settle_windows = 3;
    double fixed_point_radius = 1e-8;  // scaled by N
};

SeedFate seed_fate(const Params& p, const State3& seed, std::size_t horizon, const ProbeOptions& options = {});
CircleProbe probe_invariant_circle(const Params& p, const std::vector<State3>& seeds, std::size_t horizon,
                                   const ProbeOptions& options = {});

struct R4RegionProbe {
    bool region_two = false;
    int directions = 0;
    int locked_directions = 0;
    int circle_directions = 0;
    int diverged_directions = 0;
    int other_directions = 0;
    std::string summary;
};

// Samples parameter directions around the 1:4 point where E2 is unstable
// and classifies the attractor reached from near E2.  Region II: every such
// direction ends on a bounded attractor near E2 (circle or period-4 lock),
// both occur, and nothing escapes.
R4RegionProbe probe_r4_region(const Params& at_r4, double radius = 2e-3, int directions = 24);

std::string to_string(PeriodKind k);
std::string to_string(SeedFateKind k);
std::string to_string(CircleVerdict v);

}  // namespace sirbif
