#pragma once

#include "sirbif/model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sirbif {

enum class BifurcationKind { Transcritical, Flip, NeimarkSacker, Chenciner, R2, R3, R4, ArnoldTongue };
enum class Criticality { Supercritical, Subcritical, Degenerate, NotApplicable };

struct NondegeneracyCheck {
    std::string name;
    double value = 0.0;
    bool pass = false;
};

struct NormalFormReport {
    BifurcationKind kind = BifurcationKind::Transcritical;
    std::vector<std::pair<std::string, cplx>> coefficients;
    Criticality criticality = Criticality::NotApplicable;
    std::vector<NondegeneracyCheck> checks;
    std::vector<std::string> notes;

    cplx coefficient(const std::string& name) const;
    bool has(const std::string& name) const;
    bool nondegenerate() const;
};

// alpha = beta + r: quadratic coefficient g_uu = -2(beta+r)^2/(N r) of the
// center component and the cross derivative g_udelta = 1.
NormalFormReport transcritical_nondegeneracy(const Params& p);

// Theta1, Theta2 (plus Theta3, Theta4 when r > Psi1).  Supercritical iff the
// deciding coefficient is positive.
NormalFormReport flip_coefficients(double N, double beta, double r);

// First Lyapunov quantity on alpha = Psi3.  Resonant and excluded r values
// are reported as failed checks.
NormalFormReport ns_first_lyapunov(double N, double beta, double r);

// Second Lyapunov quantity at the Chenciner point r = (1-beta^2)/beta.
NormalFormReport chenciner_L2(double N, double beta);

struct ResonancePoint {
    BifurcationKind kind = BifurcationKind::R3;
    double beta = 0.0;
    double r_star = 0.0;
    double alpha_star = 0.0;
    double locus_residual = 0.0;  // |alpha_star - Psi3(beta, r_star)|
    bool in_biological_domain = false;
};

// kind is one of R2, R3, R4, Chenciner.
ResonancePoint resonance_point(double beta, BifurcationKind kind);

NormalFormReport resonance13_coefficients(double N, double beta);

// a0 + i b0.  With `region_probe` the region-II flag is decided by
// simulating around the 1:4 point (see dynamics::probe_r4_region).
NormalFormReport resonance14_coefficients(double N, double beta, bool region_probe = false);

enum class HomoclinicKind { H3r, H41, H42 };

// c_r (r - r*) + c_alpha (alpha - alpha*) = 0 to first order.
struct TangentLine {
    HomoclinicKind kind = HomoclinicKind::H3r;
    double r_star = 0.0;
    double alpha_star = 0.0;
    double c_r = 0.0;
    double c_alpha = 0.0;

    double slope() const;  // d alpha / d r
    double evaluate(double r, double alpha) const;
};

TangentLine homoclinic_curve_tangent(double N, double beta, HomoclinicKind kind);

struct TongueBoundary {
    double varpi1 = 0.0;  // |t1| - 1
    double varpi2 = 0.0;  // arg t1 - 2 pi n/m
    double t_minus = 0.0;
    double t_plus = 0.0;
    bool inside = false;
};

struct TongueSpec {
    int n = 0;
    int m = 0;
    double N = 0.0;
    double beta = 0.0;
    double r_star = 0.0;
    double alpha_star = 0.0;
    double rho3_0 = 0.0;       // first Lyapunov quantity at the apex
    double rho2tilde_0 = 0.0;  // twist coefficient Im(conj(mu0) p21)
    double sigma_abs = 0.0;
    bool sigma_from_oracle = false;

    TongueBoundary boundary(double r, double alpha) const;
    bool contains(double r, double alpha) const { return boundary(r, alpha).inside; }
};

// When sigma_abs is empty it is computed from the degree m-1 numeric normal
// form at the apex.
TongueSpec arnold_tongue(double N, double beta, int n, int m, std::optional<double> sigma_abs = std::nullopt);

// Circles of the truncated radial map rho -> rho (1 + eps0 + eps0_bar rho^2 +
// L2 rho^4) near a Chenciner point.
struct ChencinerPortrait {
    double eps0 = 0.0;
    double eps0_bar = 0.0;
    double L2 = 0.0;
    bool fixed_point_stable = false;
    struct Circle {
        double radius = 0.0;
        bool stable = false;
    };
    std::vector<Circle> circles;  // ordered by radius
};

ChencinerPortrait chenciner_portrait(double eps0, double eps0_bar, double L2);
// eps0 and eps0_bar come from the reduction oracle at p.
ChencinerPortrait chenciner_portrait(const Params& p, double L2);

std::string to_string(BifurcationKind k);
std::string to_string(Criticality c);
std::string to_string(HomoclinicKind k);

}  // namespace sirbif
