#include "sirbif/classifier.hpp"
#include "sirbif/continuation.hpp"
#include "sirbif/errors.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace sirbif;

namespace {

std::vector<ContinuationEvent> of_kind(const ContinuationCurve& c, EventKind k)
{
    std::vector<ContinuationEvent> out;
    std::copy_if(c.events.begin(), c.events.end(), std::back_inserter(out),
                 [k](const ContinuationEvent& e) { return e.kind == k; });
    return out;
}

Eigen::Vector3cd eigenvalues_at(const Params& p, const State3& s)
{
    Eigen::EigenSolver<Mat3> es(jacobian_at(p, s), false);
    return es.eigenvalues();
}

double closest_to(const Eigen::Vector3cd& ev, cplx target)
{
    double best = 1e300;
    for (int k = 0; k < 3; ++k) {
        best = std::min(best, std::abs(ev(k) - target));
    }
    return best;
}

}  // namespace

TEST_CASE("transcritical point on the disease-free branch and switch onto E2", "[continuation]")
{
    const Params p{0.72, 0.52, 0.21, 0.1};
    const ContinuationCurve e1 = continue_fixed_points(p, SweepParam::Alpha, {p.N, 0.0, 0.0}, 0.1, 6.0);
    const auto bps = of_kind(e1, EventKind::BP);
    REQUIRE(bps.size() == 1);
    CHECK(std::abs(bps[0].params.alpha - (p.beta + p.r)) < 1e-8);
    CHECK(closest_to(eigenvalues_at(bps[0].params, bps[0].state), 1.0) < 1e-8);
    for (const auto& pt : e1.points) {
        CHECK(std::abs(pt.state.y) < 1e-10);
    }

    const ContinuationCurve e2 = switch_branch(bps[0], SweepParam::Alpha, 0.1, 6.0);
    REQUIRE(e2.points.size() > 10);
    int on_endemic = 0;
    for (const auto& pt : e2.points) {
        if (pt.params.alpha > p.beta + p.r + 1e-3) {
            CHECK(std::abs(pt.state.x - pt.params.N * (pt.params.beta + pt.params.r) / pt.params.alpha) < 1e-8);
            ++on_endemic;
        }
    }
    CHECK(on_endemic > 10);

    const auto pds = of_kind(e2, EventKind::PD);
    REQUIRE(pds.size() == 1);
    const double psi2 = thresholds(p.beta, p.r).psi2.value;
    CHECK(std::abs(pds[0].params.alpha - psi2) < 1e-8);
    CHECK(closest_to(eigenvalues_at(pds[0].params, pds[0].state), -1.0) < 1e-7);
}

TEST_CASE("NS point on the endemic branch in the extended domain", "[continuation]")
{
    const Params p{1.0, 0.5, 0.8, 3.0};
    const ContinuationCurve c = continue_fixed_points(p, SweepParam::Alpha, endemic_point(p), 3.0, 8.0);
    const auto ns = of_kind(c, EventKind::NS);
    REQUIRE(ns.size() == 1);
    const double sum = p.beta + p.r;
    CHECK(std::abs(ns[0].params.alpha - sum * sum / (sum - 1.0)) < 1e-8);
    const auto ev = eigenvalues_at(ns[0].params, ns[0].state);
    int unit = 0;
    for (int k = 0; k < 3; ++k) {
        unit += std::abs(std::abs(ev(k)) - 1.0) < 1e-8 ? 1 : 0;
    }
    CHECK(unit == 2);
}

TEST_CASE("continuation in r follows the fixed-point equations", "[continuation]")
{
    const Params p{2.0, 0.3, 0.2, 3.0};
    const ContinuationCurve c = continue_fixed_points(p, SweepParam::R, endemic_point(p), 0.2, 0.9);
    REQUIRE_FALSE(c.points.empty());
    CHECK_FALSE(c.truncated);
    for (const auto& pt : c.points) {
        CHECK(distance(map_step(pt.params, pt.state), pt.state) < 1e-9 * p.N);
    }
    CHECK(c.points.back().params.r == Catch::Approx(0.9).margin(1e-9));
}

TEST_CASE("NS curve events appear in order with the right multipliers", "[continuation]")
{
    const double N = 1.25, beta = 0.32;
    const ContinuationCurve c = continue_ns_curve(N, beta, 0.7, 3.0);
    CHECK(c.max_locus_disagreement <= 1e-9);
    std::vector<EventKind> kinds;
    for (const auto& e : c.events) {
        kinds.push_back(e.kind);
    }
    CHECK(kinds == std::vector<EventKind>{EventKind::R2, EventKind::R3, EventKind::R4, EventKind::CH});

    // The double -1 at R2 is a Jordan block, so check trace and determinant
    // of the plane factor rather than individual eigenvalues.
    const auto r2 = of_kind(c, EventKind::R2);
    REQUIRE(r2.size() == 1);
    const Mat3 j = jacobian_at(r2[0].params, r2[0].state);
    const double mu = 1.0 - beta;
    CHECK(std::abs(j.trace() - mu + 2.0) < 1e-9);
    CHECK(std::abs(j.determinant() / mu - 1.0) < 1e-9);

    const struct {
        EventKind kind;
        cplx multiplier;
    } expected[] = {{EventKind::R3, std::polar(1.0, 2.0 * std::numbers::pi / 3.0)},
                    {EventKind::R4, cplx(0.0, 1.0)}};
    for (const auto& e : expected) {
        const auto found = of_kind(c, e.kind);
        REQUIRE(found.size() == 1);
        const auto ev = eigenvalues_at(found[0].params, found[0].state);
        INFO(to_string(e.kind));
        CHECK(closest_to(ev, e.multiplier) < 1e-6);
    }
    const auto ch = of_kind(c, EventKind::CH);
    REQUIRE(ch.size() == 1);
    CHECK(ch[0].params.r == Catch::Approx((1.0 - beta * beta) / beta).epsilon(1e-9));
    CHECK(ch[0].note == "extended domain");
}

TEST_CASE("1:3 diagnostics agree between closed form and oracle", "[continuation][oracle]")
{
    const ContinuationCurve c = continue_ns_curve(1.25, 0.32, 0.75, 0.85);
    const auto r3 = of_kind(c, EventKind::R3);
    REQUIRE(r3.size() == 1);
    const NormalFormReport rep = codim2_diagnostics(r3[0], 1.25);
    for (const auto& chk : rep.checks) {
        INFO(chk.name << " = " << chk.value);
        CHECK(chk.pass);
    }
}

TEST_CASE("continuation argument checks", "[continuation][errors]")
{
    const Params p{1.0, 0.5, 0.3, 1.0};
    CHECK_THROWS_AS(continue_fixed_points(p, SweepParam::Alpha, {1.0, 0.0, 0.0}, 2.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(continue_ns_curve(1.0, 0.5, 0.9, 0.8), InvalidInput);
}
