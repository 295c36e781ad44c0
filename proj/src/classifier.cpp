#include "sirbif/classifier.hpp"

#include "sirbif/errors.hpp"

#include <cmath>
#include <vector>

namespace sirbif {
namespace {

Threshold safe_ratio(double num, double den)
{
    Threshold t;
    if (std::abs(den) < 1e-13) {
        t.pole = true;
        return t;
    }
    t.value = num / den;
    return t;
}

bool near(double a, double b)
{
    return std::abs(a - b) <= kBoundaryTolerance * std::max(std::abs(b), 1e-300);
}

struct Boundary {
    double value;
    CaseLabel at;
};

// Walks an increasing chain of boundaries; regions has one more entry than
// boundaries.
TopoType walk(double alpha, const std::vector<Boundary>& boundaries, const std::vector<CaseLabel>& regions)
{
    TopoType out;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const Boundary& b = boundaries[i];
        if (near(alpha, b.value)) {
            out.case_label = b.at;
            out.tag = tag_of(b.at);
            out.nearby = {regions[i], regions[i + 1]};
            return out;
        }
        if (alpha < b.value) {
            out.case_label = regions[i];
            out.tag = tag_of(regions[i]);
            return out;
        }
    }
    out.case_label = regions.back();
    out.tag = tag_of(regions.back());
    return out;
}

double require(const Threshold& t, const char* name)
{
    if (!t.ok()) {
        throw SingularityError(std::string("classify_E2: threshold ") + name + " is singular here");
    }
    return t.value;
}

}  // namespace

Thresholds thresholds(double beta, double r)
{
    if (!(beta > 0.0 && beta < 1.0) || !std::isfinite(r)) {
        throw DomainError("thresholds: need 0 < beta < 1 and finite r");
    }
    const double b = beta;
    Thresholds t;
    t.psi1 = safe_ratio(-(b * b - 4.0 * b + 4.0), b - 4.0);
    t.psi2 = safe_ratio(b * b * b + 2.0 * r * b * b + r * r * b - 4.0 * b - 4.0 * r, b * (r + b - 2.0));
    t.psi3 = safe_ratio((b + r) * (b + r), r + b - 1.0);
    const double radicand = r * b * b * b + 3.0 * r * r * b * b + 3.0 * r * r * r * b + r * r * r * r;
    if (radicand >= 0.0) {
        const double root = std::sqrt(radicand);
        const double base = b * b + 2.0 * r * b + r * r;
        t.upsilon1 = safe_ratio(2.0 * (base - root), b);
        t.upsilon2 = safe_ratio(2.0 * (base + root), b);
    }
    return t;
}

TopoType classify_E1(const Params& p)
{
    if (!p.biological()) {
        throw DomainError("classify_E1: parameters outside the biological domain");
    }
    const double threshold = p.beta + p.r;
    TopoType out;
    if (near(p.alpha, threshold)) {
        out.case_label = CaseLabel::L1;
        out.nearby = {CaseLabel::D1, CaseLabel::D2};
    } else if (p.alpha < threshold) {
        out.case_label = CaseLabel::D1;
    } else {
        out.case_label = CaseLabel::D2;
    }
    out.tag = tag_of(out.case_label);
    return out;
}

TopoType classify_E2(const Params& p)
{
    if (!p.biological()) {
        throw DomainError("classify_E2: parameters outside the biological domain");
    }
    if (!(p.alpha > p.beta + p.r)) {
        throw PreconditionError("classify_E2: E2 does not exist (alpha <= beta + r)");
    }
    const Thresholds t = thresholds(p.beta, p.r);
    const double psi1 = require(t.psi1, "psi1");
    const double psi2 = require(t.psi2, "psi2");
    const double ups1 = require(t.upsilon1, "upsilon1");
    const double ups2 = require(t.upsilon2, "upsilon2");

    using L = CaseLabel;
    if (near(p.r, psi1)) {
        return walk(p.alpha, {{ups1, L::D13}, {psi2, L::L12}}, {L::D13, L::D22, L::D32});
    }
    if (p.r < psi1) {
        return walk(p.alpha, {{ups1, L::D11}, {ups2, L::D12}, {psi2, L::L11}},
                    {L::D11, L::D21, L::D12, L::D31});
    }
    const double psi3 = require(t.psi3, "psi3");
    return walk(p.alpha, {{ups1, L::D14}, {psi3, L::L2}, {ups2, L::D33}, {psi2, L::L13}},
                {L::D14, L::D23, L::D4, L::D33, L::D34});
}

TopoTag tag_of(CaseLabel label)
{
    using L = CaseLabel;
    switch (label) {
    case L::D1:
    case L::D11:
    case L::D12:
    case L::D13:
    case L::D14:
        return TopoTag::StableNode;
    case L::D21:
    case L::D22:
    case L::D23:
        return TopoTag::StableFocusNode;
    case L::D2:
    case L::D31:
    case L::D32:
    case L::D33:
    case L::D34:
        return TopoTag::SaddlePoint;
    case L::D4:
        return TopoTag::SaddleFocus;
    case L::L1:
    case L::L11:
    case L::L12:
    case L::L13:
    case L::L2:
        return TopoTag::NonHyperbolic;
    }
    return TopoTag::NonHyperbolic;
}

std::string to_string(TopoTag tag)
{
    switch (tag) {
    case TopoTag::StableNode: return "stable_node";
    case TopoTag::StableFocusNode: return "stable_focus_node";
    case TopoTag::SaddlePoint: return "saddle_point";
    case TopoTag::SaddleFocus: return "saddle_focus";
    case TopoTag::NonHyperbolic: return "non_hyperbolic";
    case TopoTag::UnstableNode: return "unstable_node";
    case TopoTag::UnstableFocusNode: return "unstable_focus_node";
    }
    return "unknown";
}

std::string to_string(CaseLabel label)
{
    using L = CaseLabel;
    switch (label) {
    case L::D1: return "D1";
    case L::L1: return "L1";
    case L::D2: return "D2";
    case L::D11: return "D11";
    case L::D21: return "D21";
    case L::D12: return "D12";
    case L::L11: return "L11";
    case L::D31: return "D31";
    case L::D13: return "D13";
    case L::D22: return "D22";
    case L::L12: return "L12";
    case L::D32: return "D32";
    case L::D14: return "D14";
    case L::D23: return "D23";
    case L::L2: return "L2";
    case L::D4: return "D4";
    case L::D33: return "D33";
    case L::L13: return "L13";
    case L::D34: return "D34";
    }
    return "unknown";
}

std::string label_string(const TopoType& t)
{
    return to_string(t.case_label) + "_" + to_string(t.tag);
}

}  // namespace sirbif
