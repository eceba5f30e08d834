#pragma once

#include "opers/rational_function.hpp"

#include <vector>

namespace opers {

template <class F>
struct PartialFractionTerm {
    F pole;
    int order;
    F coeff;
};

template <class F>
struct PartialFractions {
    Polynomial<F> polynomial_part;
    std::vector<PartialFractionTerm<F>> terms;
};

// Coefficients c_{-e}, ..., c_{count-e-1} of the Laurent expansion of f at x0, where
// e is the pole order of f at x0 (e = 0 at regular points). Index 0 is c_{-e}.
template <class F>
std::vector<F> laurent_coefficients(const RationalFunction<F>& f, const F& x0, int count,
                                    int* pole_order_out = nullptr) {
    int e = f.pole_order(x0);
    if (pole_order_out) *pole_order_out = e;
    Polynomial<F> n = f.numerator().taylor_shift(x0);
    Polynomial<F> d = f.denominator().taylor_shift(x0);
    // d(t) = t^e * dt(t) with dt(0) != 0
    std::vector<F> dc(d.coeffs().begin() + e, d.coeffs().end());
    std::vector<F> out(count, F(0));
    F inv = F(1) / dc[0];
    for (int k = 0; k < count; ++k) {
        F acc = n.coeff(k);
        for (int j = 1; j <= k && j < static_cast<int>(dc.size()); ++j) acc -= dc[j] * out[k - j];
        out[k] = acc * inv;
    }
    return out;
}

template <class F>
F residue_at(const RationalFunction<F>& f, const F& x0) {
    int e = f.pole_order(x0);
    if (e == 0) return F(0);
    return laurent_coefficients(f, x0, e)[e - 1];
}

// Exact backend: the denominator must split over its recorded poles or over `candidates`.
PartialFractions<GaussRat> partial_fractions(const ExactRF& f,
                                             const std::vector<GaussRat>& candidates = {});
// Float backend: roots found numerically and clustered within `cluster_tol` (relative).
PartialFractions<Complex> partial_fractions(const FloatRF& f, double cluster_tol = 1e-6);

template <class F>
RationalFunction<F> recombine(const PartialFractions<F>& pf) {
    RationalFunction<F> r(pf.polynomial_part);
    for (const auto& t : pf.terms) r += RationalFunction<F>::pole_term(t.coeff, t.pole, t.order);
    return r;
}

// Roots of a polynomial with complex coefficients (companion eigenvalues, Newton-polished).
std::vector<Complex> polynomial_roots(const FloatPoly& p);

}  // namespace opers
