#include "sirbif/errors.hpp"
#include "sirbif/series.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace sirbif;

namespace {

ComplexSeries random_series(std::mt19937_64& rng, int order, cplx mu)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexSeries s(order);
    s.at(1, 0) = mu;
    for (int d = 2; d <= order; ++d) {
        for (int j = 0; j <= d; ++j) {
            s.at(j, d - j) = cplx(g(rng), g(rng));
        }
    }
    return s;
}

// Direct evaluation of sum c_jk w^j conj(w)^k.
cplx brute_evaluate(const ComplexSeries& s, cplx w)
{
    cplx acc = 0.0;
    for (int j = 0; j <= s.order(); ++j) {
        for (int k = 0; j + k <= s.order(); ++k) {
            acc += s(j, k) * std::pow(w, j) * std::pow(std::conj(w), k);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("evaluate and conj agree with direct sums", "[series]")
{
    std::mt19937_64 rng(3);
    const ComplexSeries s = random_series(rng, 4, cplx(0.3, 0.9));
    for (cplx w : {cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.0, -0.4)}) {
        CHECK(std::abs(s.evaluate(w) - brute_evaluate(s, w)) < 1e-14);
        CHECK(std::abs(s.conj().evaluate(w) - std::conj(s.evaluate(w))) < 1e-14);
    }
}

TEST_CASE("composition with the identity is neutral", "[series]")
{
    std::mt19937_64 rng(4);
    const ComplexSeries s = random_series(rng, 5, cplx(0.6, 0.7));
    const ComplexSeries id = ComplexSeries::identity(5);
    CHECK((compose(s, id) - s).max_abs() < 1e-14);
    CHECK((compose(id, s) - s).max_abs() < 1e-14);
}

TEST_CASE("near-identity inverse undoes the change up to the truncation order", "[series]")
{
    std::mt19937_64 rng(5);
    const int order = 5;
    ComplexSeries h = random_series(rng, order, 1.0);
    const ComplexSeries inv = inverse_near_identity(h);
    const ComplexSeries round = compose(h, inv);
    CHECK((round - ComplexSeries::identity(order)).max_abs() < 1e-12);
}

TEST_CASE("normalize keeps resonant terms and conjugates the map", "[series]")
{
    std::mt19937_64 rng(6);
    const int order = 4;
    const cplx mu = std::polar(1.0, 2.0 * std::numbers::pi * 0.1234);
    const ComplexSeries f = random_series(rng, order, mu);
    const auto keep = [](int j, int k) { return j == k + 1; };
    const NormalFormResult nf = normalize(f, mu, keep);

    for (int d = 2; d <= order; ++d) {
        for (int j = 0; j <= d; ++j) {
            if (!keep(j, d - j)) {
                CHECK(std::abs(nf.map(j, d - j)) < 1e-12);
            }
        }
    }
    // H o G - F o H vanishes to order `order`: the defect shrinks like |w|^(order+1).
    const auto defect = [&](double rho) {
        const cplx w = std::polar(rho, 0.7);
        const cplx lhs = nf.transform.evaluate(nf.map.evaluate(w));
        const cplx rhs = f.evaluate(nf.transform.evaluate(w));
        return std::abs(lhs - rhs);
    };
    const double slope = std::log(defect(1e-2) / defect(5e-3)) / std::log(2.0);
    CHECK(slope > order + 0.7);
}

TEST_CASE("a vanishing homological denominator raises SmallDivisorError", "[series][errors]")
{
    std::mt19937_64 rng(7);
    const cplx mu = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const ComplexSeries f = random_series(rng, 3, mu);
    // conj(mu)^2 = mu at a cube root of unity, so w-bar^2 cannot be removed.
    const auto keep_only_cubic = [](int j, int k) { return j == 2 && k == 1; };
    try {
        normalize(f, mu, keep_only_cubic);
        FAIL("expected SmallDivisorError");
    } catch (const SmallDivisorError& e) {
        CHECK(e.j() == 0);
        CHECK(e.k() == 2);
    }
}
