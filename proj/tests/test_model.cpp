#include "sirbif/errors.hpp"
#include "sirbif/model.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace sirbif;

namespace {

// The map written out component by component in extended precision.
std::array<long double, 3> reference_step(const Params& p, const State3& s)
{
    const long double N = p.N, b = p.beta, r = p.r, a = p.alpha;
    const long double x = s.x, y = s.y, z = s.z;
    const long double contact = a * x * y / N;
    return {x - contact + b * (N - x), (1.0L - b - r) * y + contact, (1.0L - b) * z + r * y};
}

Params random_params(std::mt19937_64& rng, bool endemic)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Params p;
    p.N = 0.1 + 20.0 * u(rng);
    p.beta = 0.01 + 0.98 * u(rng);
    p.r = 0.01 + 0.98 * u(rng);
    p.alpha = endemic ? (p.beta + p.r) * (1.05 + 4.0 * u(rng)) : 0.05 + 6.0 * u(rng);
    return p;
}

Mat3 central_difference_jacobian(const Params& p, const State3& s)
{
    Mat3 j;
    const double h = 1e-6 * std::max(1.0, p.N);
    for (int c = 0; c < 3; ++c) {
        Vec3 e = Vec3::Zero();
        e(c) = h;
        const Vec3 fp = map_step(p, State3::from(s.vec() + e)).vec();
        const Vec3 fm = map_step(p, State3::from(s.vec() - e)).vec();
        j.col(c) = (fp - fm) / (2.0 * h);
    }
    return j;
}

std::array<cplx, 3> sorted(const Eigen::Vector3cd& ev)
{
    std::array<cplx, 3> m{ev(0), ev(1), ev(2)};
    std::sort(m.begin(), m.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return m;
}

}  // namespace

TEST_CASE("map_step agrees with an extended-precision evaluation", "[model]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const Params p = random_params(rng, false);
        const State3 s{p.N * u(rng), p.N * u(rng), p.N * u(rng)};
        const auto ref = reference_step(p, s);
        const State3 got = map_step(p, s);
        CHECK(std::abs(got.x - static_cast<double>(ref[0])) <= 1e-13 * p.N);
        CHECK(std::abs(got.y - static_cast<double>(ref[1])) <= 1e-13 * p.N);
        CHECK(std::abs(got.z - static_cast<double>(ref[2])) <= 1e-13 * p.N);
    }
}

TEST_CASE("total population relaxes geometrically towards N", "[model]")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Params p = random_params(rng, false);
        const State3 s{2.0 * p.N * u(rng), p.N * u(rng), p.N * u(rng)};
        const State3 next = map_step(p, s);
        const double expected = (1.0 - p.beta) * s.sum() + p.beta * p.N;
        CHECK(std::abs(next.sum() - expected) <= 1e-13 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("the endemic point is a fixed point with x = N (beta + r) / alpha", "[model]")
{
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Params p = random_params(rng, true);
        const auto fps = fixed_points(p);
        REQUIRE(fps.size() == 2);
        const State3 e2 = fps[1].point;
        CHECK(std::abs(e2.x - p.N * (p.beta + p.r) / p.alpha) <= 1e-13 * p.N);
        CHECK(distance(map_step(p, e2), e2) <= 1e-12 * p.N);
        CHECK(std::abs(e2.sum() - p.N) <= 1e-12 * p.N);
    }
}

TEST_CASE("E2 is absent when alpha does not exceed beta + r", "[model]")
{
    const Params p{1.0, 0.5, 0.3, 0.5};
    const auto fps = fixed_points(p);
    REQUIRE(fps.size() == 1);
    CHECK(fps[0].which == FixedPointKind::E1);
    CHECK(fps[0].point.x == 1.0);
    CHECK_THROWS_AS(endemic_point(p), PreconditionError);
}

TEST_CASE("analytic Jacobian matches central differences", "[model]")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Params p = random_params(rng, false);
        const State3 s{p.N * u(rng), p.N * u(rng), p.N * u(rng)};
        const Mat3 diff = jacobian_at(p, s) - central_difference_jacobian(p, s);
        CHECK(diff.cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + p.alpha));
    }
}

TEST_CASE("closed-form E2 multipliers match eigenvalues of a finite-difference Jacobian", "[model]")
{
    std::mt19937_64 rng(15);
    for (int i = 0; i < 200; ++i) {
        const Params p = random_params(rng, true);
        const MultiplierSet m = multipliers_E2(p);
        Eigen::EigenSolver<Mat3> es(central_difference_jacobian(p, endemic_point(p)), false);
        const auto numeric = sorted(es.eigenvalues());
        const auto closed = sorted(Eigen::Vector3cd(cplx(m.mu_real, 0.0), m.t1, m.t2));
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(numeric[k] - closed[k]) <= 1e-6 * (1.0 + p.alpha));
        }
    }
}

TEST_CASE("e_z is an eigenvector with multiplier 1 - beta everywhere", "[model]")
{
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const Params p = random_params(rng, false);
        const State3 s{p.N * u(rng), p.N * u(rng), p.N * u(rng)};
        const Vec3 image = jacobian_at(p, s) * Vec3::UnitZ();
        CHECK((image - (1.0 - p.beta) * Vec3::UnitZ()).norm() <= 1e-15);
    }
}

TEST_CASE("at alpha = Psi3 the plane multipliers have product one", "[model]")
{
    for (double beta : {0.2, 0.32, 0.5, 0.7}) {
        for (double r : {0.85, 1.2, 2.0}) {
            if (beta + r <= 1.0) {
                continue;
            }
            const double sum = beta + r;
            const double alpha = sum * sum / (sum - 1.0);
            CHECK(ns_alpha(beta, r) == Catch::Approx(alpha).epsilon(1e-14));
            const Params p{1.7, beta, r, alpha};
            Eigen::EigenSolver<Mat3> es(jacobian_at(p, endemic_point(p)), false);
            cplx product = 1.0;
            int on_circle = 0;
            for (int k = 0; k < 3; ++k) {
                const cplx m = es.eigenvalues()(k);
                if (std::abs(m - (1.0 - beta)) > 1e-9) {
                    product *= m;
                }
                on_circle += std::abs(std::abs(m) - 1.0) < 1e-10 ? 1 : 0;
            }
            INFO("beta=" << beta << " r=" << r);
            CHECK(std::abs(product - 1.0) < 1e-10);
            // A complex pair of product one lies on the unit circle.
            if (discriminant(p) < 0.0) {
                CHECK(on_circle == 2);
            }
        }
    }
}

TEST_CASE("fixed_points rejects invalid input", "[model][errors]")
{
    CHECK_THROWS_AS(fixed_points(Params{-1.0, 0.5, 0.3, 1.0}), InvalidInput);
    CHECK_THROWS_AS(fixed_points(Params{1.0, std::nan(""), 0.3, 1.0}), InvalidInput);
    CHECK_THROWS_AS(fixed_points(Params{1.0, 0.5, 0.3, -2.0}), DomainError);
    CHECK_THROWS_AS(guarded_div(1.0, 1e-14, "test"), SingularityError);
    CHECK(guarded_div(1.0, 4.0, "test") == 0.25);
}

TEST_CASE("domain predicates", "[model]")
{
    CHECK(Params{1.0, 0.5, 0.3, 0.7}.biological());
    CHECK_FALSE(Params{1.0, 0.5, 1.3, 0.7}.biological());
    CHECK(Params{1.0, 0.5, 1.3, 0.7}.extended());
    CHECK_FALSE(Params{1.0, 1.5, 0.3, 0.7}.extended());
}
