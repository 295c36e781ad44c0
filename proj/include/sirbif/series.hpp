#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace sirbif {

using cplx = std::complex<double>;

// Truncated polynomial in (w, conj w): sum of c_{jk} w^j conj(w)^k over
// j + k <= order.  A planar real map written in one complex coordinate.
class ComplexSeries {
public:
    explicit ComplexSeries(int order = 0);

    static ComplexSeries identity(int order);

    int order() const { return order_; }

    cplx operator()(int j, int k) const;
    cplx& at(int j, int k);

    ComplexSeries conj() const;
    ComplexSeries degree_part(int d) const;
    ComplexSeries truncated(int order) const;
    // Evaluates the polynomial exactly (no further truncation).
    cplx evaluate(cplx w) const;

    ComplexSeries& operator+=(const ComplexSeries& o);
    ComplexSeries& operator-=(const ComplexSeries& o);
    ComplexSeries& operator*=(cplx s);

    friend ComplexSeries operator+(ComplexSeries a, const ComplexSeries& b) { return a += b; }
    friend ComplexSeries operator-(ComplexSeries a, const ComplexSeries& b) { return a -= b; }
    friend ComplexSeries operator*(ComplexSeries a, cplx s) { return a *= s; }
    friend ComplexSeries operator*(cplx s, ComplexSeries a) { return a *= s; }
    // Product truncated at min(order(a), order(b)).
    friend ComplexSeries operator*(const ComplexSeries& a, const ComplexSeries& b);

    double max_abs() const;

private:
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(j * (order_ + 1) + k); }

    int order_;
    std::vector<cplx> c_;
};

// P(Q(w), conj Q(w)) truncated at P.order().
ComplexSeries compose(const ComplexSeries& p, const ComplexSeries& q);

// Inverse of a near-identity series H = id + h (h of degree >= 2).
ComplexSeries inverse_near_identity(const ComplexSeries& h);

using ResonancePredicate = std::function<bool(int j, int k)>;

struct NormalFormResult {
    cplx mu;
    ComplexSeries map;        // normalized map, resonant terms only above degree 1
    ComplexSeries transform;  // w_original = transform(w_normal)
};

// Removes, degree by degree, every term the predicate does not keep by a
// near-identity change h_jk = f_jk / (mu^j conj(mu)^k - mu).  Throws
// SmallDivisorError when a denominator falls below `small_divisor`.
NormalFormResult normalize(const ComplexSeries& f, cplx mu, const ResonancePredicate& keep,
                           double small_divisor = 1e-10);

}  // namespace sirbif
