#pragma once

#include "opers/algebra.hpp"

#include <map>
#include <vector>

namespace opers {

using RFVector = GradedVector<ExactRF>;

// Lift constant coefficients to rational functions.
RFVector to_rf(const GradedVector<Rational>& x);
RFVector to_rf(const GradedVector<GaussRat>& x);
RFVector derivative(const RFVector& x);
RFVector scale(const RFVector& x, const Rational& c);

// d + (p_{-1} - (twist / h^vee) rho + body) dz, body holding grades 0..cutoff and a delta part.
// The p_{-1} and rho terms are implicit.
struct Connection {
    ModelPtr model;
    ExactRF twist;
    RFVector body;

    Connection() = default;
    Connection(ModelPtr m, ExactRF phi, RFVector b);
    static Connection trivial(ModelPtr m, ExactRF phi = {});

    // Full element p_{-1} + body + rho part.
    RFVector element() const;
    static Connection from_element(ModelPtr m, ExactRF phi, const RFVector& element);

    ExactRF rho_coefficient() const;
    int cutoff() const { return model->cutoff(); }
    friend bool operator==(const Connection& a, const Connection& b) {
        return a.model == b.model && a.twist == b.twist && a.body == b.body;
    }
};

// exp(m) with m in positive grades 1..cutoff+1.
struct GaugeParameter {
    RFVector m;
    GaugeParameter() = default;
    explicit GaugeParameter(RFVector x) : m(std::move(x)) {}
    bool is_zero() const { return m.is_zero(); }
};

Connection gauge_transform(const Connection& conn, const GaugeParameter& g);

// log(exp(a) exp(b)) truncated at the given grade.
GaugeParameter compose(const GaugeParameter& outer, const GaugeParameter& inner);
GaugeParameter inverse(const GaugeParameter& g);

// Baker-Campbell-Hausdorff series up to total degree `order`, for any Lie algebra
// given by a bracket functor and a free function scale(L, Rational) found by lookup. Z_1 = a + b and
// (n+1) Z_{n+1} = [a - b, Z_n] / 2 + sum_p B_{2p}/(2p)! sum_{k_1+..+k_2p = n} [Z_k1, [.., [Z_k2p, a + b]..]].
template <class L, class Bracket>
L bch_series(const L& a, const L& b, int order, Bracket br);

struct QuasiCanonicalForm {
    ModelPtr model;
    ExactRF twist;
    std::vector<ExactRF> v;              // one per exponent slot
    std::vector<GaugeParameter> factors;  // applied left to right

    const ExactRF& v1() const { return v.at(0); }
    Connection reconstruct() const;
    // Single gauge parameter equal to the product of the factors.
    GaugeParameter total_gauge() const;
    friend bool operator==(const QuasiCanonicalForm& a, const QuasiCanonicalForm& b) {
        return a.model == b.model && a.twist == b.twist && a.v == b.v;
    }
};

QuasiCanonicalForm quasi_canonicalize(const Connection& conn);

ExactRF v1_direct(const Connection& conn);

// v_j -> v_j - f_j' + (j twist / h^vee) f_j for each slot in `f`. Slot 0 (exponent 1) is only
// accepted modulo delta.
QuasiCanonicalForm residual_gauge(const QuasiCanonicalForm& q, const std::map<int, ExactRF>& f,
                                  bool modulo_delta = false);
GaugeParameter residual_gauge_parameter(const ModelPtr& model, const std::map<int, ExactRF>& f);

// mu(s) = (a s + b) / (c s + d).
struct Mobius {
    GaussRat a, b, c, d;
    Mobius(GaussRat a_, GaussRat b_, GaussRat c_, GaussRat d_);
    static Mobius identity() { return {GaussRat(1), GaussRat(0), GaussRat(0), GaussRat(1)}; }
    GaussRat determinant() const { return a * d - b * c; }
    Mobius inverse() const { return {d, -b, -c, a}; }
    ExactRF pullback(const ExactRF& f) const;  // f(mu(s))
    ExactRF derivative() const;                // mu'(s)
    ExactRF log_derivative_of_derivative() const;  // mu''(s) / mu'(s)
};

// Pull back along z = mu(s) and gauge by mu'(s)^rho.
Connection change_coordinate(const Connection& conn, const Mobius& mu);

// ---------------------------------------------------------------------------

namespace detail {
Rational bernoulli(int n);
}

template <class L, class Bracket>
L bch_series(const L& a, const L& b, int order, Bracket br) {
    if (order < 1) return a + b;
    const L sum = a + b;
    const L diff = a - b;
    std::vector<L> z(order + 1);
    z[1] = sum;
    // nested[r][n] = sum over compositions of n into r parts of [Z_k1, [..., [Z_kr, a + b]]]
    for (int n = 1; n < order; ++n) {
        L next = scale(br(diff, z[n]), Rational(1, 2));
        std::vector<std::vector<L>> nested(n + 1, std::vector<L>(n + 1));
        std::vector<std::vector<bool>> present(n + 1, std::vector<bool>(n + 1, false));
        nested[0][0] = sum;
        present[0][0] = true;
        for (int r = 1; r <= n; ++r)
            for (int m = r; m <= n; ++m) {
                bool any = false;
                L acc = scale(sum, Rational(0));
                for (int k = 1; k <= m - (r - 1); ++k) {
                    if (!present[r - 1][m - k]) continue;
                    acc = acc + br(z[k], nested[r - 1][m - k]);
                    any = true;
                }
                if (any) {
                    nested[r][m] = acc;
                    present[r][m] = true;
                }
            }
        Rational fact(1);
        for (int p = 1; 2 * p <= n; ++p) {
            fact *= Rational((2 * p - 1) * (2 * p));
            if (!present[2 * p][n]) continue;
            next = next + scale(nested[2 * p][n], Rational(detail::bernoulli(2 * p) / fact));
        }
        z[n + 1] = scale(next, Rational(1, n + 1));
    }
    L out = z[1];
    for (int n = 2; n <= order; ++n) out = out + z[n];
    return out;
}

}  // namespace opers
