#include "sirbif/normal_forms.hpp"

#include "sirbif/classifier.hpp"
#include "sirbif/dynamics.hpp"
#include "sirbif/errors.hpp"
#include "sirbif/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sirbif {
namespace {

constexpr double kDegenerate = 1e-9;

Criticality by_sign(double deciding, bool positive_is_super)
{
    if (std::abs(deciding) < kDegenerate) {
        return Criticality::Degenerate;
    }
    const bool positive = deciding > 0.0;
    return positive == positive_is_super ? Criticality::Supercritical : Criticality::Subcritical;
}

void check(NormalFormReport& rep, const std::string& name, double value, bool pass)
{
    rep.checks.push_back({name, value, pass});
}

void put(NormalFormReport& rep, const std::string& name, cplx value)
{
    rep.coefficients.emplace_back(name, value);
}

// Horner evaluation, highest power first.
double poly(double x, std::initializer_list<double> coeffs)
{
    double s = 0.0;
    for (double c : coeffs) {
        s = s * x + c;
    }
    return s;
}

double psi3_of(double beta, double r)
{
    return guarded_div((beta + r) * (beta + r), beta + r - 1.0, "Psi3");
}

// Cubic resonant coefficient p21 on the NS locus, as a ratio of the two
// closed-form polynomials in (beta, r).
cplx ns_p21(double N, double b, double r)
{
    const cplx I(0.0, 1.0);
    const double rad = -b * (b * b + (r - 4.0) * b - 4.0 * r + 4.0) * (b + r);
    if (rad < 0.0) {
        throw DomainError("ns_p21: multipliers are real on this part of the locus");
    }
    const double sq = std::sqrt(rad);
    const double r2 = r * r, r3 = r2 * r;
    const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b, b6 = b5 * b;
    const cplx bracket = (I + r * I) * b6 + (3.0 * I * r2 - 4.0 * I) * b5
                         + (3.0 * I * r3 - 6.0 * I * r2 - 6.0 * I * r + 4.0 * I) * b4
                         + (r - 1.0) * (r3 - 7.0 * r2 - 7.0 * r - 3.0) * b3 * I
                         - 3.0 * I * (r - 1.0) * (r3 + r2 / 3.0 + r - 2.0) * b2
                         + 2.0 * I * std::pow(r - 1.0, 3) * r;
    const double tail = (b2 + (r - 4.0) * b - 4.0 * r + 4.0) * (b + r)
                        * ((r - 1.0) * b4 + (2.0 * r2 - 5.0 * r + 2.0) * b3 + (r3 - 7.0 * r2 + 6.0 * r) * b2
                           + (-3.0 * r3 + 2.0 * r2 + 4.0 * r - 3.0) * b - 2.0 * r * (r - 1.0) * (r - 1.0))
                        * b;
    const cplx s1 = std::pow(b + r, 4) * (bracket * sq - tail);
    const cplx s2 = (b2 + b * r - 4.0 * b - 4.0 * r + 4.0) * N * N * (I * sq - b2 - b * r)
                    * (I * sq - b2 - b * r + 2.0 * b + 2.0 * r - 2.0) * b * (b2 + b * r - 3.0 * b - 3.0 * r + 3.0)
                    * (I * sq + b2 + b * r);
    if (std::abs(s2) < 1e-13) {
        throw SingularityError("ns_p21: vanishing denominator");
    }
    return s1 / s2;
}

cplx ns_mu0(double b, double r)
{
    const double rad = -b * (b * b + (r - 4.0) * b - 4.0 * r + 4.0) * (b + r);
    const double den = 2.0 * b + 2.0 * r - 2.0;
    if (std::abs(den) < 1e-13) {
        throw SingularityError("ns_mu0: beta + r = 1");
    }
    return cplx(-b * b - b * r + 2.0 * b + 2.0 * r - 2.0, std::sqrt(std::max(rad, 0.0))) / den;
}

}  // namespace

cplx NormalFormReport::coefficient(const std::string& name) const
{
    for (const auto& [key, value] : coefficients) {
        if (key == name) {
            return value;
        }
    }
    throw InvalidInput("NormalFormReport: no coefficient named " + name);
}

bool NormalFormReport::has(const std::string& name) const
{
    return std::any_of(coefficients.begin(), coefficients.end(), [&](const auto& c) { return c.first == name; });
}

bool NormalFormReport::nondegenerate() const
{
    return std::all_of(checks.begin(), checks.end(), [](const NondegeneracyCheck& c) { return c.pass; });
}

NormalFormReport transcritical_nondegeneracy(const Params& p)
{
    if (!p.biological()) {
        throw DomainError("transcritical_nondegeneracy: parameters outside the biological domain");
    }
    if (std::abs(p.alpha - p.beta - p.r) > kBoundaryTolerance * std::max(1.0, p.alpha)) {
        throw PreconditionError("transcritical_nondegeneracy: requires alpha = beta + r");
    }
    NormalFormReport rep;
    rep.kind = BifurcationKind::Transcritical;
    const double s = p.beta + p.r;
    const double g_uu = -2.0 * s * s / (p.N * p.r);
    const double d11 = s * s / (p.r * p.N * p.beta);
    put(rep, "g_uu", g_uu);
    put(rep, "g_udelta", 1.0);
    put(rep, "d11", d11);
    put(rep, "d21", -d11);
    check(rep, "g_uu != 0", g_uu, g_uu != 0.0);
    check(rep, "g_udelta != 0", 1.0, true);
    return rep;
}

NormalFormReport flip_coefficients(double N, double beta, double r)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("flip_coefficients: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    NormalFormReport rep;
    rep.kind = BifurcationKind::Flip;
    const double theta1 = -guarded_div((b + r - 2.0) * (b + r - 2.0) * b,
                                       (b + r) * (b * b + (r - 4.0) * b - 4.0 * r + 4.0), "Theta1");
    const double theta2 = guarded_div(2.0 * (b + r) * (b + r - 2.0) * std::pow(b * b + b * r - 4.0, 2)
                                          * (b * b + b * r - 2.0 * b - r),
                                      b * b * r * r * N * N * (b * b + b * r - 4.0 * b - 4.0 * r + 4.0), "Theta2");
    put(rep, "Theta1", theta1);
    put(rep, "Theta2", theta2);
    check(rep, "Theta1 != 0", theta1, theta1 != 0.0);

    const double psi1 = (2.0 - b) * (2.0 - b) / (4.0 - b);
    if (r > psi1) {
        const double theta3 = -guarded_div(b * (r + b - 2.0) * (r + b - 2.0),
                                           (b * b + (r - 4.0) * b - 4.0 * r + 4.0) * (b + r), "Theta3");
        const double theta4 = guarded_div(2.0 * (b + r) * (b + r - 2.0) * (b * b + b * r - 2.0 * b - r)
                                              * std::pow(b * b + b * r - 4.0, 2),
                                          N * N * r * r * b * b * (b * b + b * r - 4.0 * b - 4.0 * r + 4.0),
                                          "Theta4");
        put(rep, "Theta3", theta3);
        put(rep, "Theta4", theta4);
        check(rep, "Theta3 != 0", theta3, theta3 != 0.0);
        check(rep, "Theta4 != 0", theta4, std::abs(theta4) >= kDegenerate);
        rep.criticality = by_sign(theta4, true);
        rep.notes.emplace_back("criticality for r > Psi1 is decided by the sign of Theta4 (the stated criterion "
                               "names an undefined Theta5)");
    } else {
        check(rep, "Theta2 != 0", theta2, std::abs(theta2) >= kDegenerate);
        rep.criticality = by_sign(theta2, true);
    }
    return rep;
}

NormalFormReport ns_first_lyapunov(double N, double beta, double r)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("ns_first_lyapunov: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    const double psi1 = (2.0 - b) * (2.0 - b) / (4.0 - b);
    if (!(r > psi1)) {
        throw PreconditionError("ns_first_lyapunov: requires r > Psi1");
    }
    NormalFormReport rep;
    rep.kind = BifurcationKind::NeimarkSacker;
    const double lead = b * b + b * r - 1.0;
    const double a = -guarded_div(lead * std::pow(b + r, 4), 8.0 * N * N * (b + r - 1.0), "first Lyapunov quantity");
    put(rep, "A", a);
    put(rep, "alpha", psi3_of(b, r));

    const std::pair<const char*, double> excluded[] = {
        {"r != 1:3 resonance", -(b * b - 3.0 * b + 3.0) / (b - 3.0)},
        {"r != 1:4 resonance", -(b * b - 2.0 * b + 2.0) / (b - 2.0)},
        {"r != 1 - beta", 1.0 - b},
        {"r != (1 - beta^2)/beta", (1.0 - b * b) / b},
    };
    for (const auto& [name, value] : excluded) {
        const double gap = r - value;
        check(rep, name, gap, std::abs(gap) > kDegenerate * std::max(1.0, std::abs(value)));
    }
    if (std::abs(lead) < kDegenerate) {
        rep.criticality = Criticality::Degenerate;
    } else {
        rep.criticality = a < 0.0 ? Criticality::Supercritical : Criticality::Subcritical;
    }
    if (r >= 1.0) {
        rep.notes.emplace_back("r >= 1: extended domain");
    }
    return rep;
}

NormalFormReport chenciner_L2(double N, double beta)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("chenciner_L2: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    std::vector<std::string> failed;
    for (double bad : {2.0 / 3.0, 3.0 / 4.0, 4.0 / 5.0}) {
        if (std::abs(b - bad) < 1e-12) {
            failed.push_back("beta = " + std::to_string(bad));
        }
    }
    const double guard = poly(b, {31.0, 4.0, -49.0, 11.0, 19.0, -8.0});
    if (std::abs(guard) < 1e-12) {
        failed.emplace_back("31b^5+4b^4-49b^3+11b^2+19b-8 = 0");
    }
    if (!failed.empty()) {
        std::string what = "chenciner_L2: excluded beta:";
        for (const auto& f : failed) {
            what += " " + f;
        }
        throw PreconditionError(what);
    }

    const double r = (1.0 - b * b) / b;
    const double s5 = poly(b, {-960.0, 5968.0, -15120.0, 18548.0, -7044.0, -10704.0, 18024.0, -12748.0, 5004.0,
                               -1064.0, 96.0, 0.0, 0.0, 0.0, 0.0})
                          * N
                      + poly(b, {123594.0, -721059.0, 2007411.0, -3554451.0, 4424911.0, -3996670.0, 2618648.0,
                                 -1226063.0, 400369.0, -88077.0, 12383.0, -1008.0, 36.0});
    const double den = 32.0 * std::pow(5.0 * b - 4.0, 2) * (3.0 * b - 2.0) * std::pow(N, 4) * std::pow(b - 1.0, 3)
                       * std::pow(b, 12) * std::pow(4.0 * b - 3.0, 2);
    const double l2 = guarded_div(s5, den, "L2");

    NormalFormReport rep;
    rep.kind = BifurcationKind::Chenciner;
    put(rep, "L2", l2);
    put(rep, "S5", s5);
    put(rep, "r", r);
    put(rep, "alpha", 1.0 / (b * (1.0 - b)));
    check(rep, "S5 != 0", s5, s5 != 0.0);
    for (double bad : {2.0 / 3.0, 3.0 / 4.0, (30.0 + 2.0 * std::sqrt(5.0)) / 44.0}) {
        check(rep, "r != " + std::to_string(bad), r - bad, std::abs(r - bad) > 1e-12);
    }
    if (std::abs(l2) < kDegenerate) {
        rep.criticality = Criticality::Degenerate;
    } else {
        rep.criticality = l2 < 0.0 ? Criticality::Supercritical : Criticality::Subcritical;
    }
    return rep;
}

ResonancePoint resonance_point(double beta, BifurcationKind kind)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("resonance_point: need 0 < beta < 1");
    }
    const double b = beta;
    ResonancePoint pt;
    pt.kind = kind;
    pt.beta = b;
    switch (kind) {
    case BifurcationKind::R2:
        pt.r_star = (2.0 - b) * (2.0 - b) / (4.0 - b);
        pt.alpha_star = psi3_of(b, pt.r_star);
        break;
    case BifurcationKind::R3:
        pt.r_star = -(b * b - 3.0 * b + 3.0) / (b - 3.0);
        pt.alpha_star = -9.0 / (b * (b - 3.0));
        break;
    case BifurcationKind::R4:
        pt.r_star = -(b * b - 2.0 * b + 2.0) / (b - 2.0);
        pt.alpha_star = -4.0 / (b * (b - 2.0));
        break;
    case BifurcationKind::Chenciner:
        pt.r_star = (1.0 - b * b) / b;
        pt.alpha_star = 1.0 / (b * (1.0 - b));
        break;
    default:
        throw InvalidInput("resonance_point: kind must be R2, R3, R4 or Chenciner");
    }
    pt.locus_residual = std::abs(pt.alpha_star - psi3_of(b, pt.r_star));
    if (pt.locus_residual > 1e-10 * (1.0 + std::abs(pt.alpha_star))) {
        throw OracleFailure("resonance_point: located point is off the NS locus");
    }
    pt.in_biological_domain = pt.r_star > 0.0 && pt.r_star < 1.0;
    return pt;
}

NormalFormReport resonance13_coefficients(double N, double beta)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("resonance13_coefficients: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    const double s3 = std::sqrt(3.0);
    const cplx I(0.0, 1.0);
    const cplx b1 = -((27.0 * I * s3 + 27.0) * (b * I - b * s3 / 3.0 - 2.0 * I) * s3)
                    / (8.0 * N * (b - 3.0) * (b - 3.0) * b);
    const double re_c1 = -(972.0 * b - 729.0) / (8.0 * N * N * std::pow(b - 3.0, 4) * b);
    const double rc = (-4.0 * b * b + 3.0 * b) / (6.0 * b * b - 18.0 * b + 18.0);

    NormalFormReport rep;
    rep.kind = BifurcationKind::R3;
    put(rep, "b1", b1);
    put(rep, "Re_c1", re_c1);
    put(rep, "Rc", rc);
    check(rep, "b1 != 0", std::abs(b1), std::abs(b1) > kDegenerate);
    check(rep, "Re c1 != 0", re_c1, std::abs(re_c1) > kDegenerate);
    rep.criticality = by_sign(re_c1, false);
    rep.notes.emplace_back("Rc is scale free; external tools report it at other scalings, compare signs only");
    return rep;
}

NormalFormReport resonance14_coefficients(double N, double beta, bool region_probe)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("resonance14_coefficients: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    const double rad = poly(b, {20.0, -96.0, 192.0, -192.0, 80.0});
    if (rad <= 0.0) {
        throw SingularityError("resonance14_coefficients: radicand is not positive");
    }
    const double root = std::sqrt(rad);
    const double a0 = -3.0 * b * b * b * N * N * std::pow(b - 2.0, 4) * (b - 2.0 / 3.0) / (2.0 * root);
    const double b0 = b * b * (b * b - 3.0 * b + 1.0) * N * N * std::pow(b - 2.0, 4) / root;

    NormalFormReport rep;
    rep.kind = BifurcationKind::R4;
    put(rep, "a0", a0);
    put(rep, "b0", b0);
    put(rep, "A0", cplx(a0, b0));
    const double lead = b * (b - 2.0) * (b - 2.0) / 8.0;
    check(rep, "beta(beta-2)^2/8 != 0", lead, lead != 0.0);
    check(rep, "a0 != 0", a0, std::abs(a0) > kDegenerate);
    check(rep, "b0 != 0", b0, std::abs(b0) > kDegenerate);
    rep.criticality = by_sign(a0, false);
    if (region_probe) {
        const ResonancePoint pt = resonance_point(b, BifurcationKind::R4);
        const R4RegionProbe probe = probe_r4_region({N, b, pt.r_star, pt.alpha_star});
        check(rep, "region II", probe.locked_directions, probe.region_two);
        rep.notes.push_back("region II probe: " + probe.summary);
    }
    return rep;
}

double TangentLine::slope() const
{
    return guarded_div(-c_r, c_alpha, "tangent slope");
}

double TangentLine::evaluate(double r, double alpha) const
{
    return c_r * (r - r_star) + c_alpha * (alpha - alpha_star);
}

TangentLine homoclinic_curve_tangent(double N, double beta, HomoclinicKind kind)
{
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("homoclinic_curve_tangent: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    TangentLine line;
    line.kind = kind;
    if (kind == HomoclinicKind::H3r) {
        const double s3 = std::sqrt(3.0);
        const double den = 24.0 * (b * b - 3.0 * b + 3.0);
        line.r_star = -(b * b - 3.0 * b + 3.0) / (b - 3.0);
        line.alpha_star = -9.0 / (b * (b - 3.0));
        line.c_r = -guarded_div(16.0 * s3 * b * b * b - 48.0 * s3 * b * b + 72.0 * b * b * b + 27.0 * s3 * b
                                    - 324.0 * b * b + 540.0 * b - 324.0,
                                den, "H3r c_r");
        line.c_alpha = guarded_div(b * b * (4.0 * s3 * b * b - 11.0 * s3 * b + 12.0 * b * b + 6.0 * s3 - 36.0 * b + 36.0),
                                   den, "H3r c_alpha");
        return line;
    }

    line.r_star = -(b * b - 2.0 * b + 2.0) / (b - 2.0);
    line.alpha_star = -4.0 / (b * (b - 2.0));
    const double N2 = N * N;
    const double N4 = N2 * N2;
    auto bp = [b](int k) { return std::pow(b, k); };

    const double chi11 = -12800.0 + 13.0 * N4 * bp(14) - 218.0 * N4 * bp(13) + 1618.0 * N4 * bp(12)
                         - 6976.0 * N4 * bp(11) + 19264.0 * N4 * bp(10) - 35392.0 * N4 * bp(9)
                         + 43456.0 * N4 * bp(8) - 34816.0 * N4 * bp(7) + (17152.0 * N4 - 1600.0) * bp(6)
                         + (-4608.0 * N4 + 12160.0) * bp(5) + (512.0 * N4 - 40064.0) * bp(4) + 73728.0 * bp(3)
                         - 80128.0 * bp(2) + 48640.0 * b;
    const double h = guarded_div(chi11,
                                 1600.0 * std::pow(b * b - 14.0 * b / 5.0 + 2.0, 2) * (b * b - 2.0 * b + 2.0), "H");
    if (h < 0.0) {
        throw DomainError("homoclinic_curve_tangent: H < 0, the 1:4 homoclinic tangents are not real");
    }
    const double sh = (kind == HomoclinicKind::H41 ? 1.0 : -1.0) * std::sqrt(h);

    const double chi7 = -51200.0 + 51200.0 * sh + 491520.0 * sh * bp(6) - 971776.0 * sh * bp(5)
                        + 1328128.0 * sh * bp(4) - 1253376.0 * sh * bp(3) + 786432.0 * sh * bp(2)
                        - 296960.0 * sh * b - 3200.0 * sh * bp(9) - 165888.0 * sh * bp(7) + 33920.0 * sh * bp(8)
                        - 17408.0 * bp(6) * N4 - 74.0 * N4 * bp(16) + 804.0 * N4 * bp(15) - 5124.0 * N4 * bp(14)
                        + 21416.0 * N4 * bp(13) - 61952.0 * N4 * bp(12) + 127232.0 * N4 * bp(11)
                        - 186752.0 * N4 * bp(10) + 194048.0 * N4 * bp(9) - 138752.0 * N4 * bp(8)
                        + 64512.0 * N4 * bp(7) + 2048.0 * bp(5) * N4 + 3.0 * N4 * bp(17) + 1600.0 * bp(9)
                        + 664064.0 * bp(5) + 98304.0 * bp(7) - 18560.0 * bp(8) - 971776.0 * bp(4)
                        + 983040.0 * bp(3) - 313344.0 * bp(6) - 663552.0 * bp(2) + 271360.0 * b;
    const double common = 3.0 * N2 * bp(8) - 26.0 * N2 * bp(7) + 88.0 * N2 * bp(6) - 144.0 * N2 * bp(5)
                          + 112.0 * bp(4) * N2 - 32.0 * bp(3) * N2;
    const double tail = 40.0 * bp(4) - 192.0 * bp(3) + 384.0 * bp(2) - 384.0 * b + 160.0;
    const double chi8 = 2.0 * (common - tail) * (common + tail);
    const double chi9 = b * (51200.0 - 178176.0 * sh * bp(6) + 307712.0 * sh * bp(5) - 356352.0 * sh * bp(4)
                             + 270336.0 * sh * bp(3) - 122880.0 * sh * bp(2) + 25600.0 * sh * b
                             + 1600.0 * sh * bp(9) + 67584.0 * sh * bp(7) - 15360.0 * sh * bp(8)
                             - 1024.0 * bp(6) * N4 - 56.0 * N4 * bp(16) + 474.0 * N4 * bp(15)
                             - 2404.0 * N4 * bp(14) + 8128.0 * N4 * bp(13) - 19264.0 * N4 * bp(12)
                             + 32704.0 * N4 * bp(11) - 39808.0 * N4 * bp(10) + 34048.0 * N4 * bp(9)
                             - 19456.0 * N4 * bp(8) + 6656.0 * N4 * bp(7) + 3.0 * N4 * bp(17) - 1600.0 * bp(9)
                             - 664064.0 * bp(5) - 98304.0 * bp(7) + 18560.0 * bp(8) + 971776.0 * bp(4)
                             - 983040.0 * bp(3) + 313344.0 * bp(6) + 663552.0 * bp(2) - 271360.0 * b);
    const double chi10 = 4.0 * (common - tail) * (common + tail);

    line.c_r = -guarded_div(chi7, chi8, "chi7/chi8");
    line.c_alpha = -guarded_div(chi9, chi10, "chi9/chi10");
    return line;
}

TongueBoundary TongueSpec::boundary(double r, double alpha) const
{
    const double b = beta;
    TongueBoundary out;
    const double modulus_sq = (-b * b * b + (alpha - 2.0 * r) * b * b - (r - 1.0) * (r - alpha + 1.0) * b + r) / (b + r);
    out.varpi1 = std::sqrt(modulus_sq) - 1.0;

    const double xi0 = -b * (4.0 * r * r * r + (12.0 * b - 4.0 * alpha) * r * r + (-8.0 * b * alpha + 12.0 * b * b) * r
                             + (2.0 * b - alpha) * (2.0 * b - alpha) * b);
    const double re_part = (-alpha * b + 2.0 * b + 2.0 * r) / (2.0 * b + 2.0 * r);
    const double im_part = std::sqrt(xi0) / (2.0 * b + 2.0 * r);
    double xi1 = 0.0;
    if (re_part < 0.0) {
        xi1 = im_part > 0.0 ? std::numbers::pi : -std::numbers::pi;
    }
    const double target = 2.0 * std::numbers::pi * n / m;
    out.varpi2 = std::atan(std::sqrt(xi0) / ((2.0 - alpha) * b + 2.0 * r)) + xi1 - target;

    const double power = 0.5 * (m - 2);
    const double drift = rho2tilde_0 / rho3_0 * out.varpi1;
    const double width = sigma_abs / std::pow(std::abs(rho3_0), power) * std::pow(out.varpi1, power);
    out.t_minus = drift - width;
    out.t_plus = drift + width;
    out.inside = std::isfinite(out.varpi2) && std::isfinite(width) && out.varpi1 > 0.0 && out.t_minus < out.varpi2
                 && out.varpi2 < out.t_plus;
    return out;
}

TongueSpec arnold_tongue(double N, double beta, int n, int m, std::optional<double> sigma_abs)
{
    if (m < 5) {
        throw PreconditionError("arnold_tongue: requires m >= 5");
    }
    if (n <= 0 || n >= m || std::gcd(n, m) != 1) {
        throw PreconditionError("arnold_tongue: n/m must be an irreducible fraction in (0, 1)");
    }
    if (!(beta > 0.0 && beta < 1.0) || !(N > 0.0)) {
        throw DomainError("arnold_tongue: need N > 0 and 0 < beta < 1");
    }
    const double b = beta;
    const double c = std::cos(2.0 * std::numbers::pi * n / m);
    if (std::abs(b + 2.0 * c - 2.0) < 1e-13) {
        throw PreconditionError("arnold_tongue: beta = 2 - 2 cos(2 pi n/m)");
    }
    TongueSpec spec;
    spec.n = n;
    spec.m = m;
    spec.N = N;
    spec.beta = b;
    spec.r_star = -(b * b + 2.0 * b * c - 2.0 * b - 2.0 * c + 2.0) / (b + 2.0 * c - 2.0);
    spec.alpha_star = -4.0 * (c - 1.0) * (c - 1.0) / (b * (b + 2.0 * c - 2.0));
    const double rs = spec.r_star;
    spec.rho3_0 = -guarded_div((b * b + b * rs - 1.0) * std::pow(rs + b, 4), 8.0 * (rs + b - 1.0) * N * N, "rho3");
    spec.rho2tilde_0 = std::imag(std::conj(ns_mu0(b, rs)) * ns_p21(N, b, rs));
    if (sigma_abs) {
        spec.sigma_abs = *sigma_abs;
    } else {
        oracle::NormalFormOptions opt;
        opt.tongue_m = m;
        const auto nf = oracle::numeric_normal_form({N, b, rs, spec.alpha_star}, oracle::ResonanceTarget::Tongue, opt);
        spec.sigma_abs = std::abs(nf.get("varsigma"));
        spec.sigma_from_oracle = true;
    }
    return spec;
}

ChencinerPortrait chenciner_portrait(double eps0, double eps0_bar, double L2)
{
    ChencinerPortrait out;
    out.eps0 = eps0;
    out.eps0_bar = eps0_bar;
    out.L2 = L2;
    out.fixed_point_stable = eps0 < 0.0;
    // Roots s = rho^2 of eps0 + eps0_bar s + L2 s^2 = 0.
    std::vector<double> roots;
    if (L2 == 0.0) {
        if (eps0_bar != 0.0) {
            roots.push_back(-eps0 / eps0_bar);
        }
    } else {
        const double disc = eps0_bar * eps0_bar - 4.0 * L2 * eps0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            roots.push_back((-eps0_bar - sq) / (2.0 * L2));
            roots.push_back((-eps0_bar + sq) / (2.0 * L2));
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double s : roots) {
        if (s > 0.0) {
            const double slope = eps0_bar + 2.0 * L2 * s;
            out.circles.push_back({std::sqrt(s), slope < 0.0});
        }
    }
    return out;
}

ChencinerPortrait chenciner_portrait(const Params& p, double L2)
{
    const oracle::ChencinerCoordinates cc = oracle::chenciner_coordinates(p);
    return chenciner_portrait(cc.eps0, cc.eps0_bar, L2);
}

std::string to_string(BifurcationKind k)
{
    switch (k) {
    case BifurcationKind::Transcritical: return "transcritical";
    case BifurcationKind::Flip: return "flip";
    case BifurcationKind::NeimarkSacker: return "neimark_sacker";
    case BifurcationKind::Chenciner: return "chenciner";
    case BifurcationKind::R2: return "R2";
    case BifurcationKind::R3: return "R3";
    case BifurcationKind::R4: return "R4";
    case BifurcationKind::ArnoldTongue: return "arnold_tongue";
    }
    return "unknown";
}

std::string to_string(Criticality c)
{
    switch (c) {
    case Criticality::Supercritical: return "supercritical";
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Degenerate: return "degenerate";
    case Criticality::NotApplicable: return "not_applicable";
    }
    return "unknown";
}

std::string to_string(HomoclinicKind k)
{
    switch (k) {
    case HomoclinicKind::H3r: return "H3r";
    case HomoclinicKind::H41: return "H41";
    case HomoclinicKind::H42: return "H42";
    }
    return "unknown";
}

}  // namespace sirbif
