#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sirbif {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

// Model parameters of the SIR map: total population N, birth/death
// probability beta, recovery probability r and contact rate alpha.
struct Params {
    double N = 1.0;
    double beta = 0.5;
    double r = 0.3;
    double alpha = 0.7;

    // N>0, 0<beta<1, 0<r<1, alpha>0.
    bool biological() const;
    // Same as biological() but allows r >= 1 for continuation runs.
    bool extended() const;
    bool finite() const;
};

// Susceptible, infective and recovered counts.
struct State3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double sum() const { return x + y + z; }
    Vec3 vec() const { return {x, y, z}; }
    static State3 from(const Vec3& v) { return {v(0), v(1), v(2)}; }
    bool finite() const;
};

double distance(const State3& a, const State3& b);
double norm(const State3& s);

enum class FixedPointKind { E1, E2 };

struct MultiplierSet {
    double mu_real = 0.0;  // 1 - beta
    cplx t1;               // Im t1 >= 0 when the pair is complex
    cplx t2;
    // Discriminant of the quadratic factor; empty for E1 whose multipliers
    // are read off a triangular Jacobian.
    std::optional<double> delta;

    bool complex_pair() const { return delta.has_value() && *delta < 0.0; }
};

enum class TopoTag {
    StableNode,
    StableFocusNode,
    SaddlePoint,
    SaddleFocus,
    NonHyperbolic,
    UnstableNode,
    UnstableFocusNode,
};

enum class CaseLabel {
    D1, L1, D2,
    D11, D21, D12, L11, D31,
    D13, D22, L12, D32,
    D14, D23, L2, D4, D33, L13, D34,
};

struct TopoType {
    TopoTag tag = TopoTag::NonHyperbolic;
    CaseLabel case_label = CaseLabel::L1;
    // Flanking open regions when the point sits on a boundary equality.
    std::vector<CaseLabel> nearby;
};

struct FixedPointRecord {
    FixedPointKind which = FixedPointKind::E1;
    State3 point;
    Mat3 jacobian = Mat3::Zero();
    MultiplierSet multipliers;
    std::optional<TopoType> topo_type;  // filled inside the biological domain
    bool coincident = false;            // E1 and E2 merge at alpha = beta + r
};

// Coefficients of the quadratic factor -t^2 + b t + c of the characteristic
// polynomial at E2.
struct QuadraticFactor {
    double b = 0.0;
    double c = 0.0;
};

State3 map_step(const Params& p, const State3& s);
std::vector<FixedPointRecord> fixed_points(const Params& p);
Mat3 jacobian_at(const Params& p, const State3& s);
State3 endemic_point(const Params& p);
QuadraticFactor quadratic_factor(const Params& p);
double discriminant(const Params& p);
MultiplierSet multipliers_E2(const Params& p);

// Psi3 = (beta+r)^2/(beta+r-1): the alpha at which |t1 t2| = 1.
double ns_alpha(double beta, double r);

std::string to_string(FixedPointKind k);

}  // namespace sirbif
