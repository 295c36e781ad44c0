#include "sirbif/classifier.hpp"
#include "sirbif/dynamics.hpp"
#include "sirbif/errors.hpp"
#include "sirbif/normal_forms.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace sirbif;

namespace {

const Params kCascade{0.72, 0.52, 0.21, 4.0};

Params with_alpha(Params p, double alpha)
{
    p.alpha = alpha;
    return p;
}

State3 nudged_E2(const Params& p)
{
    const State3 e2 = endemic_point(p);
    return {e2.x + 1e-3 * p.N, e2.y - 1e-3 * p.N, e2.z};
}

double cycle_defect(const Params& p, const State3& s, int m)
{
    State3 t = s;
    for (int k = 0; k < m; ++k) {
        t = map_step(p, t);
    }
    return distance(t, s);
}

}  // namespace

TEST_CASE("detect_period on synthetic sequences", "[dynamics]")
{
    std::vector<State3> cycle;
    for (int i = 0; i < 300; ++i) {
        const double v[] = {0.1, 0.7, 0.4};
        cycle.push_back({v[i % 3], 1.0 - v[i % 3], 0.0});
    }
    const PeriodVerdict three = detect_period(cycle, 1e-12);
    CHECK(three.kind == PeriodKind::Periodic);
    CHECK(three.period == 3);

    std::vector<State3> circle;
    const double turn = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 2048; ++i) {
        const double th = 2.0 * std::numbers::pi * turn * i;
        circle.push_back({std::cos(th), std::sin(th), 0.0});
    }
    CHECK(detect_period(circle, 1e-8).kind == PeriodKind::Quasiperiodic);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<State3> cloud;
    for (int i = 0; i < 2048; ++i) {
        cloud.push_back({u(rng), u(rng), u(rng)});
    }
    CHECK(detect_period(cloud, 1e-8).kind == PeriodKind::Aperiodic);
}

TEST_CASE("flip cascade: periods 1, 2 and 4 with genuine cycles", "[dynamics]")
{
    const double psi2 = thresholds(kCascade.beta, kCascade.r).psi2.value;
    REQUIRE(psi2 == Catch::Approx(4.0019).margin(1e-4));

    const struct {
        double alpha;
        int period;
    } cases[] = {{3.98, 1}, {4.2, 2}, {4.52, 4}};
    for (const auto& c : cases) {
        const Params p = with_alpha(kCascade, c.alpha);
        const OrbitSummary o = iterate(p, nudged_E2(p), 20000, 512);
        INFO("alpha = " << c.alpha);
        REQUIRE(o.period.kind == PeriodKind::Periodic);
        CHECK(o.period.period == c.period);
        CHECK(cycle_defect(p, o.samples.back(), c.period) < 1e-9 * p.N);
        if (c.period > 1) {
            CHECK(cycle_defect(p, o.samples.back(), c.period / 2) > 1e-4 * p.N);
        }
        CHECK(o.contraction_error <= 1e-9);
    }
}

TEST_CASE("sweep reports the cascade in order", "[dynamics]")
{
    SweepOptions o;
    o.n_transient = 20000;
    o.n_keep = 512;
    const auto records = sweep_bifurcation(with_alpha(kCascade, 3.95), SweepParam::Alpha, 3.95, 4.55, 61, o);
    REQUIRE(records.size() == 61);
    std::vector<int> first_seen;
    for (const auto& rec : records) {
        REQUIRE(rec.orbit);
        const PeriodVerdict& v = rec.orbit->period;
        if (v.kind == PeriodKind::Periodic && (first_seen.empty() || first_seen.back() != v.period)) {
            if (std::find(first_seen.begin(), first_seen.end(), v.period) == first_seen.end()) {
                first_seen.push_back(v.period);
            }
        }
    }
    CHECK(first_seen == std::vector<int>{1, 2, 4});
}

TEST_CASE("fixed-seed sweeps do not depend on the thread count", "[dynamics]")
{
    SweepOptions o;
    o.n_transient = 3000;
    o.n_keep = 64;
    o.seed_policy = SeedPolicy::Fixed;
    o.seed = State3{0.3, 0.2, 0.22};
    const Params base = with_alpha(kCascade, 3.9);
    o.threads = 1;
    const auto serial = sweep_bifurcation(base, SweepParam::Alpha, 3.9, 4.8, 40, o);
    o.threads = 4;
    const auto parallel = sweep_bifurcation(base, SweepParam::Alpha, 3.9, 4.8, 40, o);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].orbit);
        REQUIRE(parallel[i].orbit);
        const auto& a = serial[i].orbit->samples;
        const auto& b = parallel[i].orbit->samples;
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK((a[k].x == b[k].x && a[k].y == b[k].y && a[k].z == b[k].z));
        }
    }
}

TEST_CASE("a supercritical NS bifurcation produces a small circle with the linear rotation", "[dynamics]")
{
    const double beta = 0.7, r = 1.5;
    REQUIRE(ns_first_lyapunov(1.25, beta, r).coefficient("A").real() < 0.0);

    // Mean distance from E2 after settling; a supercritical circle grows like sqrt(alpha - Psi3).
    const auto circle_size = [&](double eps) {
        const Params p{1.25, beta, r, ns_alpha(beta, r) * (1.0 + eps)};
        const State3 e2 = endemic_point(p);
        const OrbitSummary o = iterate(p, State3{e2.x + 1e-5, e2.y - 1e-5, e2.z}, 200000, 4096);
        CHECK_FALSE(o.diverged);
        CHECK(o.period.kind == PeriodKind::Quasiperiodic);
        REQUIRE(o.rotation);
        const double linear = std::arg(multipliers_E2(p).t1) / (2.0 * std::numbers::pi);
        CHECK(std::abs(o.rotation->value - linear) < 2e-3);
        double mean = 0.0;
        for (const auto& s : o.samples) {
            mean += distance(s, e2);
        }
        return mean / static_cast<double>(o.samples.size());
    };
    const double small = circle_size(1e-4);
    const double large = circle_size(4e-4);
    CHECK(large / small == Catch::Approx(2.0).epsilon(0.1));
}

TEST_CASE("period-5 lock inside the 2:5 tongue", "[dynamics]")
{
    const Params p{10.0, 0.9, 0.4246, 5.419};
    const OrbitSummary o = iterate(p, State3{2.18, 5.78, 2.12}, 100000, 1000);
    REQUIRE(o.period.kind == PeriodKind::Periodic);
    CHECK(o.period.period == 5);
    CHECK(cycle_defect(p, o.samples.back(), 5) < 1e-9 * p.N);
    REQUIRE(o.rotation);
    REQUIRE(o.rotation->lock);
    CHECK(o.rotation->lock->first == 2);
    CHECK(o.rotation->lock->second == 5);
}

TEST_CASE("a stable focus attracts every seed and has no circle", "[dynamics]")
{
    const Params p{1.0, 0.3, 0.4, 2.0};
    REQUIRE(classify_E2(p).tag == TopoTag::StableFocusNode);
    const State3 e2 = endemic_point(p);
    const std::vector<State3> seeds{{e2.x + 0.01, e2.y - 0.01, e2.z}, {e2.x + 0.2, e2.y - 0.1, e2.z - 0.1}};
    const CircleProbe probe = probe_invariant_circle(p, seeds, 200000);
    CHECK(probe.verdict == CircleVerdict::NoCircle);
    for (const auto& f : probe.fates) {
        CHECK(f.kind == SeedFateKind::ToFixedPoint);
    }
}

TEST_CASE("orbits that leave every bounded region are flagged as diverged", "[dynamics]")
{
    const Params p{1.0, 0.3, 0.4, 2.0};
    const OrbitSummary o = iterate(p, State3{-50.0, 60.0, 0.0}, 1000, 10);
    CHECK(o.diverged);
    CHECK(o.period.kind == PeriodKind::Diverged);
    CHECK(o.diverged_at > 0);
}

TEST_CASE("dynamics error paths", "[dynamics][errors]")
{
    const Params p{1.0, 0.3, 0.4, 2.0};
    IterateOptions strict;
    strict.contraction_tolerance = 1e-300;
    strict.contraction_every = 1;
    CHECK_THROWS_AS(iterate(p, State3{0.37, 0.41, 0.93}, 100, 10, strict), NumericalBlowup);

    const State3 e2 = endemic_point(p);
    CHECK_THROWS_AS(rotation_number(p, {e2, e2, e2}, e2), DomainError);
    CHECK_THROWS_AS(seed_fate(Params{1.0, 0.3, 0.4, 0.5}, State3{0.9, 0.1, 0.0}, 1000), PreconditionError);
    CHECK_THROWS_AS(parse_sweep_param("gamma"), InvalidInput);
}
