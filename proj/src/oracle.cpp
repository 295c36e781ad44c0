#include "sirbif/oracle.hpp"

#include "sirbif/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sirbif::oracle {
namespace {

Vec2 plane_residual(const Params& p, const State3& base, const State3& image_of_base,
                    const Eigen::Matrix<double, 3, 2>& injection, const Eigen::Matrix<double, 2, 3>& projection,
                    const Vec2& xi)
{
    const Vec3 point = base.vec() + injection * xi;
    const State3 image = map_step(p, State3::from(point));
    return projection * (image.vec() - image_of_base.vec());
}

int wrap_mod(int a, int m)
{
    const int r = a % m;
    return r < 0 ? r + m : r;
}

ResonancePredicate keep_for(ResonanceTarget target, int m)
{
    switch (target) {
    case ResonanceTarget::NeimarkSacker:
    case ResonanceTarget::Chenciner:
        return [](int j, int k) { return j - k == 1; };
    case ResonanceTarget::Resonance3:
        return [](int j, int k) { return wrap_mod(j - k - 1, 3) == 0; };
    case ResonanceTarget::Resonance4:
        return [](int j, int k) { return wrap_mod(j - k - 1, 4) == 0; };
    case ResonanceTarget::Tongue:
        return [m](int j, int k) { return wrap_mod(j - k - 1, m) == 0; };
    }
    return [](int, int) { return false; };
}

}  // namespace

Vec2 ReducedMap2::apply(const Vec2& xi, int order) const
{
    Vec2 out = linear * xi;
    if (order >= 2) {
        const Eigen::Vector3d mono(xi(0) * xi(0), xi(0) * xi(1), xi(1) * xi(1));
        out += quad * mono;
    }
    if (order >= 3) {
        const Eigen::Vector4d mono(xi(0) * xi(0) * xi(0), xi(0) * xi(0) * xi(1), xi(0) * xi(1) * xi(1),
                                   xi(1) * xi(1) * xi(1));
        out += cubic * mono;
    }
    return out;
}

State3 ReducedMap2::lift(const Vec2& xi) const
{
    return State3::from(origin.vec() + injection * xi);
}

Vec2 ReducedMap2::project(const State3& s) const
{
    return projection * (s.vec() - origin.vec());
}

ReducedMap2 reduce_to_plane(const Params& p, const Mat2& frame)
{
    if (std::abs(frame.determinant()) < 1e-12) {
        throw InvalidInput("reduce_to_plane: singular frame");
    }
    ReducedMap2 red;
    red.origin = endemic_point(p);
    for (int c = 0; c < 2; ++c) {
        red.injection(0, c) = frame(0, c);
        red.injection(1, c) = frame(1, c);
        red.injection(2, c) = -frame(0, c) - frame(1, c);
    }
    Eigen::Matrix<double, 2, 3> drop_z = Eigen::Matrix<double, 2, 3>::Zero();
    drop_z(0, 0) = 1.0;
    drop_z(1, 1) = 1.0;
    red.projection = frame.inverse() * drop_z;

    const State3 image_of_origin = map_step(p, red.origin);
    auto g = [&](const Vec2& xi) {
        return plane_residual(p, red.origin, image_of_origin, red.injection, red.projection, xi);
    };

    const double h = 0.1 * (1.0 + norm(red.origin));
    const Vec2 e1(1.0, 0.0), e2(0.0, 1.0);
    const Vec2 g1p = g(h * e1), g1m = g(-h * e1), g2p = g(h * e2), g2m = g(-h * e2);
    red.linear.col(0) = (g1p - g1m) / (2.0 * h);
    red.linear.col(1) = (g2p - g2m) / (2.0 * h);
    red.quad.col(0) = (g1p + g1m) / (2.0 * h * h);
    red.quad.col(2) = (g2p + g2m) / (2.0 * h * h);
    const Vec2 sum_dir = e1 + e2, diff_dir = e1 - e2;
    red.quad.col(1) = (g(h * sum_dir) + g(-h * sum_dir) - g(h * diff_dir) - g(-h * diff_dir)) / (4.0 * h * h);

    // The map is quadratic; confirm the reconstruction off the stencil.
    double worst = 0.0;
    double scale = 0.0;
    for (const Vec2& probe : {Vec2(0.37, -0.61), Vec2(-0.83, 0.29), Vec2(0.55, 0.71)}) {
        const Vec2 xi = h * probe;
        const Vec2 exact = g(xi);
        worst = std::max(worst, (exact - red.apply(xi, 3)).norm());
        scale = std::max(scale, exact.norm());
    }
    if (worst > 1e-8 * (1.0 + scale)) {
        throw OracleFailure("reduce_to_plane: quadratic reconstruction residual " + std::to_string(worst));
    }
    return red;
}

Vec2 ComplexReduction::to_plane(cplx w) const
{
    const Vec2c v = q * w;
    return 2.0 * scale * v.real();
}

cplx ComplexReduction::to_complex(const Vec2& xi) const
{
    const Vec2c x = xi.cast<cplx>();
    return p.dot(x) / scale;
}

ComplexReduction complexify(const ReducedMap2& reduced, Normalization norm, int order)
{
    Eigen::EigenSolver<Mat2> es(reduced.linear);
    const Vec2c values = es.eigenvalues();
    const int pick = values(0).imag() >= values(1).imag() ? 0 : 1;
    ComplexReduction out;
    out.mu = values(pick);
    if (std::abs(out.mu.imag()) < 1e-12) {
        throw PreconditionError("complexify: the planar multipliers are real");
    }
    Vec2c q = es.eigenvectors().col(pick);

    Eigen::EigenSolver<Mat2> es_t(reduced.linear.transpose());
    const Vec2c values_t = es_t.eigenvalues();
    const int pick_t = std::abs(values_t(0) - std::conj(out.mu)) <= std::abs(values_t(1) - std::conj(out.mu)) ? 0 : 1;
    Vec2c p = es_t.eigenvectors().col(pick_t);

    if (norm == Normalization::InfectiveUnit) {
        const cplx infective = reduced.injection(1, 0) * q(0) + reduced.injection(1, 1) * q(1);
        if (std::abs(infective) < 1e-14) {
            throw OracleFailure("complexify: eigenvector has no infective component");
        }
        q /= infective;
        out.scale = 0.5;
    } else {
        q /= q.norm();
        out.scale = 1.0;
    }
    const cplx c = p.dot(q);
    p /= std::conj(c);
    out.q = q;
    out.p = p;

    const double s = out.scale;
    std::array<ComplexSeries, 2> xi{ComplexSeries(order), ComplexSeries(order)};
    for (int i = 0; i < 2; ++i) {
        xi[i].at(1, 0) = s * q(i);
        xi[i].at(0, 1) = s * std::conj(q(i));
    }
    const ComplexSeries x11 = xi[0] * xi[0];
    const ComplexSeries x12 = xi[0] * xi[1];
    const ComplexSeries x22 = xi[1] * xi[1];
    std::array<ComplexSeries, 2> g{ComplexSeries(order), ComplexSeries(order)};
    for (int i = 0; i < 2; ++i) {
        g[i] = xi[0] * cplx(reduced.linear(i, 0)) + xi[1] * cplx(reduced.linear(i, 1));
        if (order >= 2) {
            g[i] += x11 * cplx(reduced.quad(i, 0)) + x12 * cplx(reduced.quad(i, 1)) + x22 * cplx(reduced.quad(i, 2));
        }
        if (order >= 3 && reduced.cubic.row(i).cwiseAbs().maxCoeff() > 0.0) {
            g[i] += x11 * xi[0] * cplx(reduced.cubic(i, 0)) + x11 * xi[1] * cplx(reduced.cubic(i, 1))
                    + x22 * xi[0] * cplx(reduced.cubic(i, 2)) + x22 * xi[1] * cplx(reduced.cubic(i, 3));
        }
    }
    out.map = (g[0] * std::conj(p(0)) + g[1] * std::conj(p(1))) * cplx(1.0 / s);
    // The linear part is diagonal by construction; drop roundoff in (0,1).
    out.map.at(1, 0) = out.mu;
    out.map.at(0, 1) = 0.0;
    return out;
}

cplx NumericNormalForm::get(const std::string& name) const
{
    for (const auto& [key, value] : coefficients) {
        if (key == name) {
            return value;
        }
    }
    throw InvalidInput("NumericNormalForm: no coefficient named " + name);
}

bool NumericNormalForm::has(const std::string& name) const
{
    for (const auto& entry : coefficients) {
        if (entry.first == name) {
            return true;
        }
    }
    return false;
}

NumericNormalForm numeric_normal_form(const Params& p, ResonanceTarget target, const NormalFormOptions& options)
{
    int order = 3;
    int m = options.tongue_m;
    switch (target) {
    case ResonanceTarget::NeimarkSacker:
    case ResonanceTarget::Resonance3:
    case ResonanceTarget::Resonance4:
        order = 3;
        break;
    case ResonanceTarget::Chenciner:
        order = 5;
        break;
    case ResonanceTarget::Tongue:
        if (m < 5) {
            throw PreconditionError("numeric_normal_form: tongues need m >= 5");
        }
        order = m - 1;
        break;
    }

    const ReducedMap2 reduced = reduce_to_plane(p, options.frame);
    NumericNormalForm out;
    out.target = target;
    out.order = order;
    out.reduction = complexify(reduced, options.normalization, order);
    out.mu = out.reduction.mu;
    out.result = normalize(out.reduction.map, out.mu, keep_for(target, m), options.small_divisor);

    const ComplexSeries& g = out.result.map;
    const cplx mu = out.mu;
    auto add = [&out](const char* name, cplx v) { out.coefficients.emplace_back(name, v); };
    switch (target) {
    case ResonanceTarget::NeimarkSacker: {
        const cplx c1 = g(2, 1);
        add("c1", c1);
        add("first_lyapunov", std::real(std::conj(mu) * c1));
        add("twist", std::imag(std::conj(mu) * c1));
        break;
    }
    case ResonanceTarget::Resonance3: {
        const cplx b = g(0, 2);
        const cplx a = g(2, 1);
        const cplx b1 = 3.0 * std::conj(mu) * b;
        const cplx c1 = -3.0 * std::norm(b) + 3.0 * mu * mu * a;
        add("B", b);
        add("A", a);
        add("b1", b1);
        add("c1", c1);
        const double b1sq = std::norm(b1);
        add("Rc", b1sq > 0.0 ? c1.real() / b1sq : 0.0);
        add("Ic", b1sq > 0.0 ? c1.imag() / b1sq : 0.0);
        break;
    }
    case ResonanceTarget::Resonance4: {
        const cplx c = g(2, 1);
        const cplx d = g(0, 3);
        add("C", c);
        add("D", d);
        add("A", std::abs(d) > 0.0 ? std::conj(mu) * c / std::abs(d) : cplx(0.0));
        break;
    }
    case ResonanceTarget::Chenciner: {
        const cplx c1 = g(2, 1);
        const cplx c2 = g(3, 2);
        const cplx d1 = c1 / mu;
        const cplx d2 = c2 / mu;
        add("c1", c1);
        add("c2", c2);
        add("d1", d1);
        add("d2", d2);
        add("L1", d1.real());
        add("L2", d2.real() + 0.5 * d1.imag() * d1.imag());
        const double quarter = (c1 / (4.0 * mu)).imag();
        add("L2_quarter", d2.real() + quarter * quarter);
        break;
    }
    case ResonanceTarget::Tongue: {
        const cplx rho21 = g(2, 1);
        const cplx varsigma = g(0, m - 1);
        add("rho21", rho21);
        add("varsigma", varsigma);
        const cplx rotated = rho21 * std::conj(mu);
        add("rho3", rotated.real());
        add("rho2", rotated.imag());
        break;
    }
    }
    return out;
}

double numeric_ns_coefficient(const Params& p)
{
    const MultiplierSet ms = multipliers_E2(p);
    if (!ms.complex_pair() || std::abs(std::abs(ms.t1) - 1.0) > 1e-8) {
        throw PreconditionError("numeric_ns_coefficient: parameters are not on the Neimark-Sacker locus");
    }
    const double b = p.beta;
    const double r3 = -(b * b - 3.0 * b + 3.0) / (b - 3.0);
    const double r4 = -(b * b - 2.0 * b + 2.0) / (b - 2.0);
    if (std::abs(p.r - r3) < 1e-6) {
        throw SmallDivisorError("numeric_ns_coefficient: r within 1e-6 of the 1:3 resonance (conj(mu)^2 - mu)", 0, 2);
    }
    if (std::abs(p.r - r4) < 1e-6) {
        throw SmallDivisorError("numeric_ns_coefficient: r within 1e-6 of the 1:4 resonance (conj(mu)^3 - mu)", 0, 3);
    }
    return numeric_normal_form(p, ResonanceTarget::NeimarkSacker).get("first_lyapunov").real();
}

FlipReduction flip_reduction(const Params& p)
{
    const State3 e = endemic_point(p);
    const Mat3 j = jacobian_at(p, e);
    Eigen::EigenSolver<Mat3> es(j);
    int pick = -1;
    double best = 1e300;
    for (int i = 0; i < 3; ++i) {
        const double gap = std::abs(es.eigenvalues()(i) + 1.0);
        if (gap < best) {
            best = gap;
            pick = i;
        }
    }
    if (best > 1e-8) {
        throw PreconditionError("flip_reduction: no multiplier within 1e-8 of -1");
    }
    Vec3 q = es.eigenvectors().col(pick).real();
    q.normalize();
    Eigen::EigenSolver<Mat3> es_t(j.transpose());
    int pick_t = 0;
    best = 1e300;
    for (int i = 0; i < 3; ++i) {
        const double gap = std::abs(es_t.eigenvalues()(i) + 1.0);
        if (gap < best) {
            best = gap;
            pick_t = i;
        }
    }
    Vec3 adj = es_t.eigenvectors().col(pick_t).real();
    adj /= adj.dot(q);

    const State3 fe = map_step(p, e);
    const double h = 0.05 * (1.0 + norm(e));
    auto image = [&](const Vec3& d) -> Vec3 { return map_step(p, State3::from(e.vec() + d)).vec() - fe.vec(); };
    const Vec3 quad_q = (image(h * q) + image(-h * q)) / (2.0 * h * h);
    const double a = adj.dot(quad_q);
    const Vec3 w2 = (j - Mat3::Identity()).fullPivLu().solve(a * q - quad_q);

    // g(v) = <adj, F(E + q v + w2 v^2) - F(E)> is a quartic in v.
    const int samples = 9;
    const double span = 0.02 * (1.0 + norm(e));
    Eigen::MatrixXd vander(samples, 4);
    Eigen::VectorXd rhs(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = -1.0 + 2.0 * i / (samples - 1);
        const double v = span * t;
        rhs(i) = adj.dot(image(q * v + w2 * v * v)) / span;
        for (int c = 0; c < 4; ++c) {
            vander(i, c) = std::pow(t, c + 1);
        }
    }
    const Eigen::VectorXd coeff = vander.colPivHouseholderQr().solve(rhs);
    FlipReduction out;
    out.multiplier = coeff(0);
    out.quadratic = coeff(1) / span;
    out.cubic = coeff(2) / (span * span);
    out.coefficient = out.quadratic * out.quadratic + out.cubic;
    out.fit_residual = (vander * coeff - rhs).cwiseAbs().maxCoeff();
    if (out.fit_residual > 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
        throw OracleFailure("flip_reduction: quartic fit residual " + std::to_string(out.fit_residual));
    }
    return out;
}

double numeric_pd_coefficient(const Params& p)
{
    return flip_reduction(p).coefficient;
}

TranscriticalManifold center_manifold_E1(const Params& p)
{
    if (!p.biological()) {
        throw DomainError("center_manifold_E1: parameters outside the biological domain");
    }
    if (std::abs(p.alpha - p.beta - p.r) > 1e-10 * std::max(1.0, p.alpha)) {
        throw PreconditionError("center_manifold_E1: requires alpha = beta + r within 1e-10");
    }
    const double b = p.beta;
    const double r = p.r;
    const State3 e1{p.N, 0.0, 0.0};

    // Eigenbasis of JF(E1) for contact rate beta + r + delta.
    auto basis = [&](double delta) {
        Mat3 t;
        t << -(b + r + delta) / r, 0.0, 1.0,
             (delta + b) / r, 0.0, 0.0,
             1.0, 1.0, 0.0;
        return t;
    };

    const int nu = 9;
    const int nd = 9;
    const double hu = 1e-2 * p.N;
    const double hd = 1e-2 * (b + r);
    // Monomials u^a delta^c with 0 <= a <= 2, 0 <= c <= 4.
    const int ncol = 15;
    Eigen::MatrixXd design(nu * nd, ncol);
    Eigen::MatrixXd data(nu * nd, 3);
    int row = 0;
    for (int i = 0; i < nu; ++i) {
        const double su = -1.0 + 2.0 * i / (nu - 1);
        for (int k = 0; k < nd; ++k) {
            const double sd = -1.0 + 2.0 * k / (nd - 1);
            const double delta = hd * sd;
            Params q = p;
            q.alpha = b + r + delta;
            const Mat3 t = basis(delta);
            const Vec3 start = e1.vec() + t.col(0) * (hu * su);
            const Vec3 image = map_step(q, State3::from(start)).vec() - e1.vec();
            const Vec3 coords = t.fullPivLu().solve(image);
            data.row(row) = coords.transpose() / hu;
            int c = 0;
            for (int a = 0; a <= 2; ++a) {
                for (int d = 0; d <= 4; ++d) {
                    design(row, c++) = std::pow(su, a) * std::pow(sd, d);
                }
            }
            ++row;
        }
    }
    const Eigen::MatrixXd coeff = design.colPivHouseholderQr().solve(data);
    const double residual = (design * coeff - data).cwiseAbs().maxCoeff();
    const double size = data.cwiseAbs().maxCoeff();
    if (residual > 1e-9 * (1.0 + size)) {
        throw OracleFailure("center_manifold_E1: fit residual " + std::to_string(residual));
    }
    // Column layout: (a=0,d=0..4), (a=1,d=0..4), (a=2,d=0..4).  Undo the scalings
    // u = hu*su and delta = hd*sd, data already divided by hu.
    auto coef = [&](int a, int d, int comp) {
        const int c = a * 5 + d;
        return coeff(c, comp) * hu / (std::pow(hu, a) * std::pow(hd, d));
    };
    TranscriticalManifold out;
    out.d11 = coef(2, 0, 1) / b;
    out.d12 = coef(1, 1, 1) / b;
    out.d13 = coef(0, 2, 1) / b;
    out.d21 = coef(2, 0, 2) / b;
    out.d22 = coef(1, 1, 2) / b;
    out.d23 = coef(0, 2, 2) / b;
    out.g_uu = 2.0 * coef(2, 0, 0);
    out.g_udelta = coef(1, 1, 0);
    out.fit_residual = residual;
    return out;
}

ChencinerCoordinates chenciner_coordinates(const Params& p)
{
    const MultiplierSet ms = multipliers_E2(p);
    if (!ms.complex_pair()) {
        throw PreconditionError("chenciner_coordinates: E2 multipliers are real");
    }
    const NumericNormalForm nf = numeric_normal_form(p, ResonanceTarget::NeimarkSacker);
    ChencinerCoordinates out;
    out.eps0 = std::abs(nf.mu) - 1.0;
    out.eps0_bar = std::abs(nf.mu) * std::real(nf.get("c1") / nf.mu);
    return out;
}

std::string to_string(ResonanceTarget t)
{
    switch (t) {
    case ResonanceTarget::NeimarkSacker: return "neimark_sacker";
    case ResonanceTarget::Resonance3: return "resonance_1_3";
    case ResonanceTarget::Resonance4: return "resonance_1_4";
    case ResonanceTarget::Chenciner: return "chenciner";
    case ResonanceTarget::Tongue: return "tongue";
    }
    return "unknown";
}

}  // namespace sirbif::oracle
