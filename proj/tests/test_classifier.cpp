#include "sirbif/classifier.hpp"
#include "sirbif/errors.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace sirbif;

namespace {

struct Moduli {
    int inside = 0;
    int outside = 0;
    int unit = 0;
    bool complex_pair = false;
};

Moduli moduli_of(const Mat3& j)
{
    Eigen::EigenSolver<Mat3> es(j, false);
    Moduli m;
    for (int k = 0; k < 3; ++k) {
        const cplx z = es.eigenvalues()(k);
        const double mod = std::abs(z);
        if (std::abs(mod - 1.0) < 1e-7) {
            ++m.unit;
        } else if (mod < 1.0) {
            ++m.inside;
        } else {
            ++m.outside;
        }
        m.complex_pair = m.complex_pair || std::abs(z.imag()) > 1e-10;
    }
    return m;
}

bool consistent(TopoTag tag, const Moduli& m)
{
    switch (tag) {
    case TopoTag::StableNode: return m.inside == 3 && !m.complex_pair;
    case TopoTag::StableFocusNode: return m.inside == 3 && m.complex_pair;
    case TopoTag::SaddlePoint: return m.inside > 0 && m.outside > 0 && m.unit == 0 && !m.complex_pair;
    case TopoTag::SaddleFocus: return m.inside > 0 && m.outside > 0 && m.unit == 0 && m.complex_pair;
    case TopoTag::NonHyperbolic: return m.unit > 0;
    case TopoTag::UnstableNode: return m.outside == 3 && !m.complex_pair;
    case TopoTag::UnstableFocusNode: return m.outside == 3 && m.complex_pair;
    }
    return false;
}

}  // namespace

TEST_CASE("first row of the E1 table", "[classifier]")
{
    const Params p{1.0, 0.5, 0.3, 0.5};
    const TopoType t = classify_E1(p);
    CHECK(t.tag == TopoTag::StableNode);
    CHECK(t.case_label == CaseLabel::D1);
    CHECK(label_string(t) == "D1_stable_node");
}

TEST_CASE("labels agree with eigenvalue moduli on random samples", "[classifier]")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int e2_seen = 0;
    for (int i = 0; i < 3000; ++i) {
        const double beta = 0.01 + 0.98 * u(rng);
        const double r = 0.01 + 0.98 * u(rng);
        const double alpha = 0.01 + 12.0 * u(rng);
        const Params p{0.2 + 5.0 * u(rng), beta, r, alpha};
        const TopoType t1 = classify_E1(p);
        INFO("E1 at beta=" << beta << " r=" << r << " alpha=" << alpha << " label " << label_string(t1));
        CHECK(consistent(t1.tag, moduli_of(jacobian_at(p, {p.N, 0.0, 0.0}))));
        if (alpha > beta + r) {
            ++e2_seen;
            const TopoType t2 = classify_E2(p);
            INFO("E2 label " << label_string(t2));
            CHECK(consistent(t2.tag, moduli_of(jacobian_at(p, endemic_point(p)))));
        }
    }
    CHECK(e2_seen > 1000);
}

TEST_CASE("boundary equalities are non-hyperbolic with flanking labels", "[classifier]")
{
    const Params on_bp{1.0, 0.4, 0.3, 0.7};
    const TopoType t = classify_E1(on_bp);
    CHECK(t.tag == TopoTag::NonHyperbolic);
    CHECK_FALSE(t.nearby.empty());

    const double beta = 0.5, r = 0.8;
    const Params on_ns{2.0, beta, r, ns_alpha(beta, r)};
    const TopoType t2 = classify_E2(on_ns);
    CHECK(t2.tag == TopoTag::NonHyperbolic);
    CHECK(moduli_of(jacobian_at(on_ns, endemic_point(on_ns))).unit == 2);
}

TEST_CASE("thresholds reproduce their defining multiplier conditions", "[classifier]")
{
    const double beta = 0.52, r = 0.21;
    const Thresholds th = thresholds(beta, r);
    REQUIRE(th.psi2.ok());
    // Psi2: E2 has a multiplier -1.
    const Params p{0.72, beta, r, th.psi2.value};
    Eigen::EigenSolver<Mat3> es(jacobian_at(p, endemic_point(p)), false);
    double closest = 1e9;
    for (int k = 0; k < 3; ++k) {
        closest = std::min(closest, std::abs(es.eigenvalues()(k) + 1.0));
    }
    CHECK(closest < 1e-9);
    // Psi1 = (2 - beta)^2 / (4 - beta).
    CHECK(th.psi1.value == Catch::Approx((2.0 - beta) * (2.0 - beta) / (4.0 - beta)).epsilon(1e-14));
    // Upsilon1/2 are the roots of the discriminant in alpha.
    for (const Threshold& u : {th.upsilon1, th.upsilon2}) {
        if (u.ok() && u.value > beta + r) {
            CHECK(std::abs(discriminant(Params{0.72, beta, r, u.value})) < 1e-10);
        }
    }
}

TEST_CASE("classifier preconditions", "[classifier][errors]")
{
    CHECK_THROWS_AS(classify_E2(Params{1.0, 0.5, 0.3, 0.5}), PreconditionError);
    CHECK_THROWS_AS(classify_E2(Params{1.0, 0.5, 1.3, 5.0}), DomainError);
    CHECK_THROWS_AS(classify_E1(Params{1.0, 1.5, 0.3, 0.5}), DomainError);
}
