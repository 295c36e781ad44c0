#include "sirbif/errors.hpp"
#include "sirbif/normal_forms.hpp"
#include "sirbif/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace sirbif;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Multiplier of E2 in the upper half plane, from a numeric eigensolve.
cplx upper_multiplier(const Params& p)
{
    Eigen::EigenSolver<Mat3> es(jacobian_at(p, endemic_point(p)), false);
    cplx best(0.0, -1.0);
    for (int k = 0; k < 3; ++k) {
        const cplx z = es.eigenvalues()(k);
        if (std::abs(z - (1.0 - p.beta)) > 1e-9 && z.imag() >= best.imag()) {
            best = z;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("flip coefficients at the cascade parameters", "[normal-forms]")
{
    const NormalFormReport rep = flip_coefficients(0.72, 0.52, 0.21);
    CHECK(rel(rep.coefficient("Theta1").real(), -0.7871437846) < 1e-6);
    CHECK(rel(rep.coefficient("Theta2").real(), 2344.468744) < 1e-6);
    CHECK(rep.nondegenerate());
}

TEST_CASE("NS first Lyapunov quantity is positive near the 1:3 point", "[normal-forms]")
{
    const NormalFormReport rep = ns_first_lyapunov(1.25, 0.32, 0.7983);
    CHECK(rep.coefficient("A").real() > 0.0);
    CHECK(rep.criticality == Criticality::Subcritical);
}

TEST_CASE("strong resonances sit on the NS locus at the right angles", "[normal-forms]")
{
    for (double beta : {0.2, 0.32, 0.6}) {
        const struct {
            BifurcationKind kind;
            double angle;
        } cases[] = {{BifurcationKind::R3, 2.0 * std::numbers::pi / 3.0}, {BifurcationKind::R4, std::numbers::pi / 2.0}};
        for (const auto& c : cases) {
            const ResonancePoint pt = resonance_point(beta, c.kind);
            const cplx mu = upper_multiplier(Params{1.0, beta, pt.r_star, pt.alpha_star});
            INFO(to_string(c.kind) << " at beta=" << beta);
            CHECK(std::abs(std::abs(mu) - 1.0) < 1e-10);
            CHECK(std::abs(std::arg(mu) - c.angle) < 1e-8);
        }
        const ResonancePoint r2 = resonance_point(beta, BifurcationKind::R2);
        Eigen::EigenSolver<Mat3> es(jacobian_at(Params{1.0, beta, r2.r_star, r2.alpha_star},
                                                endemic_point(Params{1.0, beta, r2.r_star, r2.alpha_star})),
                                    false);
        int at_minus_one = 0;
        for (int k = 0; k < 3; ++k) {
            at_minus_one += std::abs(es.eigenvalues()(k) + 1.0) < 1e-6 ? 1 : 0;
        }
        CHECK(at_minus_one == 2);
    }
}

TEST_CASE("the first Lyapunov quantity vanishes at the Chenciner point", "[normal-forms][oracle]")
{
    const double beta = 0.32, N = 1.25;
    const ResonancePoint ch = resonance_point(beta, BifurcationKind::Chenciner);
    const auto lyap = [&](double r) { return oracle::numeric_ns_coefficient(Params{N, beta, r, ns_alpha(beta, r)}); };
    const double scale = std::max(std::abs(lyap(ch.r_star - 0.05)), std::abs(lyap(ch.r_star + 0.05)));
    CHECK(std::abs(lyap(ch.r_star)) < 1e-8 * scale);
    CHECK(lyap(ch.r_star - 0.05) * lyap(ch.r_star + 0.05) < 0.0);
}

TEST_CASE("1:3 resonance coefficients agree with the oracle", "[normal-forms][oracle]")
{
    const double N = 1.25, beta = 0.32;
    const NormalFormReport closed = resonance13_coefficients(N, beta);
    const ResonancePoint pt = resonance_point(beta, BifurcationKind::R3);
    const auto nf = oracle::numeric_normal_form(Params{N, beta, pt.r_star, pt.alpha_star}, oracle::ResonanceTarget::Resonance3);
    CHECK(rel(closed.coefficient("Re_c1").real(), nf.get("c1").real()) < 1e-6);
    CHECK(rel(closed.coefficient("Rc").real(), nf.get("Rc").real()) < 1e-6);
}

TEST_CASE("Arnold tongue apex lies on the locus at the rational angle", "[normal-forms]")
{
    const TongueSpec t = arnold_tongue(10.0, 0.9, 2, 5);
    const cplx mu = upper_multiplier(Params{10.0, 0.9, t.r_star, t.alpha_star});
    CHECK(std::abs(std::abs(mu) - 1.0) < 1e-10);
    CHECK(std::abs(std::arg(mu) - 2.0 * std::numbers::pi * 2.0 / 5.0) < 1e-8);
    const TongueBoundary apex = t.boundary(t.r_star, t.alpha_star);
    CHECK(std::abs(apex.varpi1) < 1e-12);
    CHECK(std::abs(apex.varpi2) < 1e-8);
    // rho3_0 is the first Lyapunov quantity at the apex.
    const double numeric = oracle::numeric_ns_coefficient(Params{10.0, 0.9, t.r_star, t.alpha_star});
    CHECK(rel(t.rho3_0, numeric) < 1e-6);
}

TEST_CASE("tongue boundary is consistent with numeric multipliers", "[normal-forms]")
{
    const TongueSpec t = arnold_tongue(10.0, 0.9, 2, 5, 0.01);
    for (double dr : {-0.01, 0.0, 0.01}) {
        for (double da : {0.05, 0.2}) {
            const double r = t.r_star + dr, a = t.alpha_star + da;
            const TongueBoundary b = t.boundary(r, a);
            const cplx mu = upper_multiplier(Params{10.0, 0.9, r, a});
            CHECK(std::abs(b.varpi1 - (std::abs(mu) - 1.0)) < 1e-10);
            CHECK(std::abs(b.varpi2 - (std::arg(mu) - 4.0 * std::numbers::pi / 5.0)) < 1e-10);
            // The boundary curves only exist on the unstable side of the locus.
            if (b.varpi1 > 0.0) {
                CHECK(b.t_minus <= b.t_plus);
            } else {
                CHECK_FALSE(b.inside);
            }
        }
    }
}

TEST_CASE("homoclinic tangents pass through their resonance points", "[normal-forms]")
{
    const double beta = 0.32;
    const TangentLine h3 = homoclinic_curve_tangent(1.25, beta, HomoclinicKind::H3r);
    const ResonancePoint r3 = resonance_point(beta, BifurcationKind::R3);
    CHECK(h3.r_star == Catch::Approx(r3.r_star).epsilon(1e-14));
    CHECK(h3.alpha_star == Catch::Approx(r3.alpha_star).epsilon(1e-14));
    CHECK(h3.evaluate(h3.r_star, h3.alpha_star) == 0.0);
    CHECK(std::isfinite(h3.slope()));
    CHECK(h3.evaluate(h3.r_star + 1.0, h3.alpha_star + h3.slope()) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("Chenciner portrait radii solve the amplitude equation", "[normal-forms]")
{
    const ChencinerPortrait two = chenciner_portrait(-0.01, 0.5, -4.0);
    REQUIRE(two.circles.size() == 2);
    CHECK(two.fixed_point_stable);
    for (const auto& c : two.circles) {
        const double s = c.radius * c.radius;
        CHECK(std::abs(-0.01 + 0.5 * s - 4.0 * s * s) < 1e-14);
    }
    CHECK_FALSE(two.circles[0].stable);
    CHECK(two.circles[1].stable);

    const ChencinerPortrait none = chenciner_portrait(-0.01, -0.5, -4.0);
    CHECK(none.circles.empty());
}

TEST_CASE("normal-form preconditions", "[normal-forms][errors]")
{
    CHECK_THROWS_AS(arnold_tongue(1.0, 0.5, 1, 4), PreconditionError);
    CHECK_THROWS_AS(arnold_tongue(1.0, 0.5, 2, 6), PreconditionError);
    CHECK_THROWS_AS(resonance_point(1.5, BifurcationKind::R3), DomainError);
    CHECK_THROWS_AS(resonance_point(0.5, BifurcationKind::Flip), InvalidInput);
}
