#pragma once

#include "sirbif/model.hpp"
#include "sirbif/series.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

// Numeric center-manifold reductions and normal-form coefficients computed
// directly from evaluations of map_step.  Serves as the independent check
// for every closed-form coefficient in normal_forms.hpp.
namespace sirbif::oracle {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Vec2c = Eigen::Vector2cd;

// Restriction of the map to the invariant plane x + y + z = N through E2,
// written in a frame of that plane.  The map is quadratic, so `linear` and
// `quad` describe the restriction exactly and `cubic` is identically zero.
struct ReducedMap2 {
    State3 origin;
    Mat2 linear = Mat2::Zero();
    // Row i: coefficients of xi1^2, xi1*xi2, xi2^2 in component i.
    Eigen::Matrix<double, 2, 3> quad = Eigen::Matrix<double, 2, 3>::Zero();
    // Row i: coefficients of xi1^3, xi1^2 xi2, xi1 xi2^2, xi2^3.
    Eigen::Matrix<double, 2, 4> cubic = Eigen::Matrix<double, 2, 4>::Zero();
    Eigen::Matrix<double, 3, 2> injection = Eigen::Matrix<double, 3, 2>::Zero();
    Eigen::Matrix<double, 2, 3> projection = Eigen::Matrix<double, 2, 3>::Zero();

    // Taylor polynomial of the reduced map truncated at `order` (1..3).
    Vec2 apply(const Vec2& xi, int order = 3) const;
    State3 lift(const Vec2& xi) const;
    Vec2 project(const State3& s) const;
};

// `frame` columns are basis vectors of the plane in (x - x*, y - y*)
// coordinates.  Requires alpha > beta + r.
ReducedMap2 reduce_to_plane(const Params& p, const Mat2& frame = Mat2::Identity());

// How the complex coordinate w is tied to the real plane coordinates.
enum class Normalization {
    // xi = (q w + conj(q) conj(w)) / 2 with the infective component of the
    // physical eigenvector equal to 1; reproduces the closed-form scalings.
    InfectiveUnit,
    // xi = q w + conj(q) conj(w) with |q| = 1 in the frame coordinates.
    Orthonormal,
};

struct ComplexReduction {
    cplx mu;   // multiplier with Im mu > 0
    Vec2c q;   // eigenvector of `linear` for mu, in frame coordinates
    Vec2c p;   // adjoint eigenvector, conj(p)^T q = 1
    double scale = 1.0;
    ComplexSeries map;

    Vec2 to_plane(cplx w) const;
    cplx to_complex(const Vec2& xi) const;
};

ComplexReduction complexify(const ReducedMap2& reduced, Normalization norm, int order);

enum class ResonanceTarget { NeimarkSacker, Resonance3, Resonance4, Chenciner, Tongue };

struct NormalFormOptions {
    Normalization normalization = Normalization::InfectiveUnit;
    Mat2 frame = Mat2::Identity();
    int tongue_m = 5;  // used by ResonanceTarget::Tongue
    double small_divisor = 1e-10;
};

// Coefficient table produced by a numeric homological solve.
//   NeimarkSacker: c1, first_lyapunov = Re(conj(mu) c1), twist = Im(conj(mu) c1)
//   Resonance3:    B, A, b1, c1, Rc, Ic
//   Resonance4:    C, D, A
//   Chenciner:     c1, c2, d1, d2, L1, L2 (radial), L2_quarter (Im(c1/4mu)^2 + Re(c2/mu))
//   Tongue:        rho21, varsigma, rho3, rho2
struct NumericNormalForm {
    ResonanceTarget target = ResonanceTarget::NeimarkSacker;
    int order = 3;
    cplx mu;
    NormalFormResult result;
    ComplexReduction reduction;
    std::vector<std::pair<std::string, cplx>> coefficients;

    cplx get(const std::string& name) const;
    bool has(const std::string& name) const;
};

// Order 3 for NS/R3/R4, 5 for Chenciner, m-1 for an n/m tongue.
NumericNormalForm numeric_normal_form(const Params& p, ResonanceTarget target,
                                      const NormalFormOptions& options = {});

// Re(conj(mu0) p21) at a point of the NS locus; must equal the first
// Lyapunov quantity.  Throws SmallDivisorError within 1e-6 of the 1:3 or
// 1:4 resonant r.
double numeric_ns_coefficient(const Params& p);

struct FlipReduction {
    double multiplier = 0.0;  // linear coefficient of the 1-D reduced map
    double quadratic = 0.0;   // g''(0)/2
    double cubic = 0.0;       // g'''(0)/6
    double coefficient = 0.0; // e(0) = g''^2/4 + g'''/6
    double fit_residual = 0.0;
};

// Reduces the map at a flip point of E2 onto its 1-D center manifold and
// fits the reduced map.  Requires a multiplier within 1e-8 of -1.
FlipReduction flip_reduction(const Params& p);
double numeric_pd_coefficient(const Params& p);

// Quadratic center-manifold coefficients at E1 for alpha = beta + r in the
// eigen-coordinates (u1, v1, w1): v1 = d11 u1^2 + d12 u1 delta + d13 delta^2,
// w1 = d21 u1^2 + d22 u1 delta + d23 delta^2, delta = alpha - beta - r.
struct TranscriticalManifold {
    double d11 = 0.0, d12 = 0.0, d13 = 0.0;
    double d21 = 0.0, d22 = 0.0, d23 = 0.0;
    // Center component g1(u1, delta): second derivatives at the origin.
    double g_uu = 0.0;
    double g_udelta = 0.0;
    double fit_residual = 0.0;
};

TranscriticalManifold center_manifold_E1(const Params& p);

// Normalized Chenciner coordinates at a parameter point near the NS locus:
// eps0 = |t1| - 1 and eps0_bar = Re(conj(mu) c1) at that point.
struct ChencinerCoordinates {
    double eps0 = 0.0;
    double eps0_bar = 0.0;
};

ChencinerCoordinates chenciner_coordinates(const Params& p);

std::string to_string(ResonanceTarget t);

}  // namespace sirbif::oracle
