#include "sirbif/model.hpp"

#include "sirbif/classifier.hpp"
#include "sirbif/errors.hpp"

#include <cmath>

namespace sirbif {

double guarded_div(double num, double den, const char* what)
{
    if (!(std::abs(den) >= 1e-13)) {
        throw SingularityError(std::string("vanishing denominator in ") + what);
    }
    return num / den;
}

bool Params::finite() const
{
    return std::isfinite(N) && std::isfinite(beta) && std::isfinite(r) && std::isfinite(alpha);
}

bool Params::biological() const
{
    return finite() && N > 0.0 && beta > 0.0 && beta < 1.0 && r > 0.0 && r < 1.0 && alpha > 0.0;
}

bool Params::extended() const
{
    return finite() && N > 0.0 && beta > 0.0 && beta < 1.0 && r > 0.0 && alpha > 0.0;
}

bool State3::finite() const
{
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(const State3& a, const State3& b)
{
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

double norm(const State3& s)
{
    return std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z);
}

State3 map_step(const Params& p, const State3& s)
{
    if (!p.finite() || !s.finite()) {
        throw InvalidInput("map_step: non-finite parameter or state component");
    }
    if (!(p.N > 0.0)) {
        throw InvalidInput("map_step: N must be positive");
    }
    const double contact = p.alpha * s.x * s.y / p.N;
    return {
        s.x - contact + p.beta * (p.N - s.x),
        (1.0 - p.beta - p.r) * s.y + contact,
        (1.0 - p.beta) * s.z + p.r * s.y,
    };
}

Mat3 jacobian_at(const Params& p, const State3& s)
{
    const double a = p.alpha / p.N;
    Mat3 j;
    j << 1.0 - p.beta - a * s.y, -a * s.x, 0.0,
         a * s.y, 1.0 - p.beta - p.r + a * s.x, 0.0,
         0.0, p.r, 1.0 - p.beta;
    return j;
}

State3 endemic_point(const Params& p)
{
    if (!(p.alpha > p.beta + p.r)) {
        throw PreconditionError("E2 exists only for alpha > beta + r");
    }
    const double br = p.beta + p.r;
    const double excess = p.alpha - br;
    const double scale = guarded_div(p.N * excess, p.alpha * br, "E2 components");
    return {guarded_div(p.N * br, p.alpha, "E2 x-component"), p.beta * scale, p.r * scale};
}

QuadraticFactor quadratic_factor(const Params& p)
{
    const double b = p.beta;
    const double r = p.r;
    const double a = p.alpha;
    const double den = b + r;
    QuadraticFactor q;
    q.b = guarded_div((2.0 - a) * b + 2.0 * r, den, "quadratic factor");
    q.c = guarded_div(b * b * b + (-a + 2.0 * r) * b * b + (r - 1.0) * (r - a + 1.0) * b - r, den,
                      "quadratic factor");
    return q;
}

double discriminant(const Params& p)
{
    const double a = p.alpha;
    const double b = p.beta;
    const double r = p.r;
    return a * a * b * b - 4.0 * a * b * b * b - 8.0 * a * b * b * r - 4.0 * a * b * r * r
           + 4.0 * b * b * b * b + 12.0 * b * b * b * r + 12.0 * b * b * r * r + 4.0 * b * r * r * r;
}

MultiplierSet multipliers_E2(const Params& p)
{
    if (!p.finite()) {
        throw InvalidInput("multipliers_E2: non-finite parameters");
    }
    if (!(p.alpha > p.beta + p.r)) {
        throw PreconditionError("multipliers_E2: E2 does not exist (alpha <= beta + r)");
    }
    const double den = 2.0 * p.beta + 2.0 * p.r;
    if (std::abs(den) < 1e-13) {
        throw SingularityError("multipliers_E2: 2 beta + 2 r vanishes");
    }
    const double centre = -p.beta * p.alpha + 2.0 * p.beta + 2.0 * p.r;
    const double delta = discriminant(p);
    const cplx root = std::sqrt(cplx(delta, 0.0));
    MultiplierSet m;
    m.mu_real = 1.0 - p.beta;
    m.t1 = (centre + root) / den;
    m.t2 = (centre - root) / den;
    m.delta = delta;
    return m;
}

double ns_alpha(double beta, double r)
{
    return guarded_div((beta + r) * (beta + r), beta + r - 1.0, "Psi3 = (beta+r)^2/(beta+r-1)");
}

std::vector<FixedPointRecord> fixed_points(const Params& p)
{
    if (!p.finite() || !(p.N > 0.0)) {
        throw InvalidInput("fixed_points: N must be positive and all parameters finite");
    }
    if (!(p.alpha > 0.0)) {
        throw DomainError("fixed_points: alpha must be positive");
    }
    std::vector<FixedPointRecord> out;

    FixedPointRecord e1;
    e1.which = FixedPointKind::E1;
    e1.point = {p.N, 0.0, 0.0};
    e1.jacobian = jacobian_at(p, e1.point);
    e1.multipliers.mu_real = 1.0 - p.beta;
    e1.multipliers.t1 = 1.0 + p.alpha - p.beta - p.r;
    e1.multipliers.t2 = 1.0 - p.beta;
    const double threshold = p.beta + p.r;
    e1.coincident = std::abs(p.alpha - threshold) <= 1e-12 * std::max(1.0, std::abs(p.alpha));
    if (p.biological()) {
        e1.topo_type = classify_E1(p);
    }
    out.push_back(e1);

    if (p.alpha > threshold && !e1.coincident) {
        FixedPointRecord e2;
        e2.which = FixedPointKind::E2;
        e2.point = endemic_point(p);
        e2.jacobian = jacobian_at(p, e2.point);
        e2.multipliers = multipliers_E2(p);
        if (p.biological()) {
            e2.topo_type = classify_E2(p);
        }
        out.push_back(e2);
    }
    return out;
}

std::string to_string(FixedPointKind k)
{
    return k == FixedPointKind::E1 ? "E1" : "E2";
}

}  // namespace sirbif
