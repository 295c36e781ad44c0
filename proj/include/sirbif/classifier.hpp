#pragma once

#include "sirbif/model.hpp"

#include <limits>
#include <string>

namespace sirbif {

struct Threshold {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool pole = false;

    bool ok() const { return !pole && value == value; }
};

// Parameter thresholds in alpha (psi1 is a threshold in r).
//   psi1     = (2-beta)^2/(4-beta)
//   psi2     = alpha where E2 has multiplier -1
//   psi3     = (beta+r)^2/(beta+r-1), |t1 t2| = 1
//   upsilon1/2 = the two alpha roots of the discriminant
struct Thresholds {
    Threshold psi1;
    Threshold psi2;
    Threshold psi3;
    Threshold upsilon1;
    Threshold upsilon2;
};

// Relative gap below which a boundary equality is declared.
inline constexpr double kBoundaryTolerance = 1e-9;

Thresholds thresholds(double beta, double r);

TopoType classify_E1(const Params& p);
TopoType classify_E2(const Params& p);

TopoTag tag_of(CaseLabel label);
std::string to_string(TopoTag tag);
std::string to_string(CaseLabel label);
// e.g. "D1_stable_node", "L2_non_hyperbolic".
std::string label_string(const TopoType& t);

}  // namespace sirbif
