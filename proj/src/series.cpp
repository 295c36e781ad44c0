#include "sirbif/series.hpp"

#include "sirbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sirbif {

ComplexSeries::ComplexSeries(int order) : order_(order)
{
    if (order < 0) {
        throw InvalidInput("ComplexSeries: negative order");
    }
    c_.assign(static_cast<std::size_t>((order + 1) * (order + 1)), cplx(0.0, 0.0));
}

ComplexSeries ComplexSeries::identity(int order)
{
    ComplexSeries s(order);
    if (order >= 1) {
        s.at(1, 0) = 1.0;
    }
    return s;
}

cplx ComplexSeries::operator()(int j, int k) const
{
    if (j < 0 || k < 0 || j + k > order_) {
        return {0.0, 0.0};
    }
    return c_[index(j, k)];
}

cplx& ComplexSeries::at(int j, int k)
{
    if (j < 0 || k < 0 || j + k > order_) {
        throw InvalidInput("ComplexSeries::at: index (" + std::to_string(j) + "," + std::to_string(k)
                           + ") outside order " + std::to_string(order_));
    }
    return c_[index(j, k)];
}

ComplexSeries ComplexSeries::conj() const
{
    ComplexSeries out(order_);
    for (int j = 0; j <= order_; ++j) {
        for (int k = 0; j + k <= order_; ++k) {
            out.at(k, j) = std::conj((*this)(j, k));
        }
    }
    return out;
}

ComplexSeries ComplexSeries::degree_part(int d) const
{
    ComplexSeries out(order_);
    for (int j = 0; j <= d && j <= order_; ++j) {
        const int k = d - j;
        if (k >= 0 && j + k <= order_) {
            out.at(j, k) = (*this)(j, k);
        }
    }
    return out;
}

ComplexSeries ComplexSeries::truncated(int order) const
{
    ComplexSeries out(order);
    for (int j = 0; j <= order; ++j) {
        for (int k = 0; j + k <= order; ++k) {
            out.at(j, k) = (*this)(j, k);
        }
    }
    return out;
}

cplx ComplexSeries::evaluate(cplx w) const
{
    const cplx wb = std::conj(w);
    std::vector<cplx> pw(static_cast<std::size_t>(order_ + 1)), pb(static_cast<std::size_t>(order_ + 1));
    pw[0] = pb[0] = 1.0;
    for (int i = 1; i <= order_; ++i) {
        pw[i] = pw[i - 1] * w;
        pb[i] = pb[i - 1] * wb;
    }
    cplx sum = 0.0;
    for (int j = 0; j <= order_; ++j) {
        for (int k = 0; j + k <= order_; ++k) {
            const cplx c = (*this)(j, k);
            if (c != cplx(0.0, 0.0)) {
                sum += c * pw[j] * pb[k];
            }
        }
    }
    return sum;
}

ComplexSeries& ComplexSeries::operator+=(const ComplexSeries& o)
{
    const int n = std::min(order_, o.order_);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; j + k <= n; ++k) {
            at(j, k) += o(j, k);
        }
    }
    return *this;
}

ComplexSeries& ComplexSeries::operator-=(const ComplexSeries& o)
{
    const int n = std::min(order_, o.order_);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; j + k <= n; ++k) {
            at(j, k) -= o(j, k);
        }
    }
    return *this;
}

ComplexSeries& ComplexSeries::operator*=(cplx s)
{
    for (auto& v : c_) {
        v *= s;
    }
    return *this;
}

ComplexSeries operator*(const ComplexSeries& a, const ComplexSeries& b)
{
    const int n = std::min(a.order(), b.order());
    ComplexSeries out(n);
    for (int j1 = 0; j1 <= n; ++j1) {
        for (int k1 = 0; j1 + k1 <= n; ++k1) {
            const cplx va = a(j1, k1);
            if (va == cplx(0.0, 0.0)) {
                continue;
            }
            for (int j2 = 0; j1 + k1 + j2 <= n; ++j2) {
                for (int k2 = 0; j1 + k1 + j2 + k2 <= n; ++k2) {
                    const cplx vb = b(j2, k2);
                    if (vb != cplx(0.0, 0.0)) {
                        out.at(j1 + j2, k1 + k2) += va * vb;
                    }
                }
            }
        }
    }
    return out;
}

double ComplexSeries::max_abs() const
{
    double m = 0.0;
    for (const auto& v : c_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

ComplexSeries compose(const ComplexSeries& p, const ComplexSeries& q)
{
    const int n = p.order();
    const ComplexSeries qn = q.truncated(n);
    const ComplexSeries qb = qn.conj();
    std::vector<ComplexSeries> pow_q{ComplexSeries(n)}, pow_qb{ComplexSeries(n)};
    pow_q[0].at(0, 0) = 1.0;
    pow_qb[0].at(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        pow_q.push_back(pow_q.back() * qn);
        pow_qb.push_back(pow_qb.back() * qb);
    }
    ComplexSeries out(n);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; j + k <= n; ++k) {
            const cplx c = p(j, k);
            if (c == cplx(0.0, 0.0)) {
                continue;
            }
            out += (pow_q[j] * pow_qb[k]) * c;
        }
    }
    return out;
}

ComplexSeries inverse_near_identity(const ComplexSeries& h)
{
    const int n = h.order();
    const ComplexSeries id = ComplexSeries::identity(n);
    const ComplexSeries nonlinear = h - id;
    ComplexSeries inv = id;
    // Each pass fixes one more degree of inv = id - nonlinear(inv).
    for (int pass = 0; pass < n; ++pass) {
        inv = id - compose(nonlinear, inv);
    }
    return inv;
}

NormalFormResult normalize(const ComplexSeries& f, cplx mu, const ResonancePredicate& keep, double small_divisor)
{
    const int n = f.order();
    NormalFormResult out{mu, f, ComplexSeries::identity(n)};
    for (int d = 2; d <= n; ++d) {
        ComplexSeries h(n);
        bool any = false;
        for (int j = 0; j <= d; ++j) {
            const int k = d - j;
            const cplx coeff = out.map(j, k);
            if (keep(j, k) || coeff == cplx(0.0, 0.0)) {
                continue;
            }
            const cplx den = std::pow(mu, j) * std::pow(std::conj(mu), k) - mu;
            if (std::abs(den) < small_divisor) {
                throw SmallDivisorError("normal form: small divisor mu^" + std::to_string(j) + " conj(mu)^"
                                            + std::to_string(k) + " - mu",
                                        j, k);
            }
            h.at(j, k) = coeff / den;
            any = true;
        }
        if (!any) {
            continue;
        }
        const ComplexSeries step = ComplexSeries::identity(n) + h;
        out.map = compose(inverse_near_identity(step), compose(out.map, step));
        out.transform = compose(out.transform, step);
    }
    return out;
}

}  // namespace sirbif
