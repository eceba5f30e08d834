#pragma once

#include "opers/polynomial.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace opers {

template <class F>
struct Pole {
    F root;
    int order;
    friend bool operator==(const Pole& a, const Pole& b) {
        return a.order == b.order && a.root == b.root;
    }
};

namespace detail {
inline bool root_less(const GaussRat& a, const GaussRat& b) { return a < b; }
inline bool root_less(const Complex& a, const Complex& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}
}  // namespace detail

// numerator / denominator with monic denominator. When every denominator root is
// known the denominator is kept as a sorted list of poles; otherwise it is an
// expanded polynomial. On the exact backend the fraction is always reduced.
template <class F>
class RationalFunction {
public:
    using Poly = Polynomial<F>;
    using PoleList = std::vector<Pole<F>>;

    RationalFunction() = default;
    RationalFunction(const F& c) : num_(c) {}
    RationalFunction(Poly p) : num_(std::move(p)) {}
    RationalFunction(Poly num, Poly den) {
        if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
        num_ = std::move(num);
        den_ = std::move(den);
        factored_ = false;
        normalize_general();
    }
    static RationalFunction from_poles(Poly num, PoleList poles) {
        RationalFunction r;
        r.num_ = std::move(num);
        r.poles_ = std::move(poles);
        r.factored_ = true;
        r.normalize_factored();
        return r;
    }
    // coeff / (z - root)^order
    static RationalFunction pole_term(const F& coeff, const F& root, int order) {
        return from_poles(Poly(coeff), PoleList{{root, order}});
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return factored_ ? poles_.empty() : den_.degree() == 0; }
    bool is_factored() const { return factored_; }
    const Poly& numerator() const { return num_; }
    const PoleList& poles() const {
        if (!factored_) throw std::logic_error("denominator is not factored");
        return poles_;
    }
    Poly denominator() const {
        if (!factored_) return den_;
        Poly d(F(1));
        for (const auto& p : poles_)
            for (int k = 0; k < p.order; ++k) d = d.times_linear(p.root);
        return d;
    }
    int denominator_degree() const {
        if (!factored_) return den_.degree();
        int s = 0;
        for (const auto& p : poles_) s += p.order;
        return s;
    }

    // Multiplicity of x as a root of the denominator.
    int pole_order(const F& x) const {
        if (factored_) {
            for (const auto& p : poles_)
                if (p.root == x) return p.order;
            return 0;
        }
        int k = 0;
        Poly d = den_;
        for (;;) {
            F rem;
            Poly q = d.divide_linear(x, &rem);
            if (!FieldTraits<F>::is_zero(rem)) return k;
            d = std::move(q);
            ++k;
        }
    }

    // Factor the denominator over candidate roots, verifying divisibility.
    std::optional<RationalFunction> with_poles(const std::vector<F>& candidates) const {
        if (factored_) return *this;
        Poly d = den_;
        PoleList poles;
        for (const auto& c : candidates) {
            if (std::any_of(poles.begin(), poles.end(), [&](const Pole<F>& p) { return p.root == c; }))
                continue;
            int k = 0;
            for (;;) {
                F rem;
                Poly q = d.divide_linear(c, &rem);
                if (!FieldTraits<F>::is_zero(rem) || d.degree() < 1) break;
                d = std::move(q);
                ++k;
            }
            if (k > 0) poles.push_back({c, k});
        }
        if (d.degree() != 0) return std::nullopt;
        return from_poles(num_, std::move(poles));
    }

    F operator()(const F& x) const {
        F den(1);
        if (factored_) {
            for (const auto& p : poles_) den *= pow_int(x - p.root, p.order);
        } else {
            den = den_(x);
        }
        if (FieldTraits<F>::is_zero(den)) throw std::domain_error("evaluation at a pole");
        return num_(x) / den;
    }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RationalFunction& operator*=(const F& s) {
        num_ *= s;
        if (num_.is_zero()) *this = RationalFunction();
        return *this;
    }
    friend RationalFunction operator*(RationalFunction a, const F& s) { return a *= s; }
    friend RationalFunction operator*(const F& s, RationalFunction a) { return a *= s; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.factored_ && b.factored_) {
            if (a.poles_ == b.poles_) return from_poles(a.num_ + b.num_, a.poles_);
            PoleList merged = merge(a.poles_, b.poles_, true);
            Poly n = lift(a.num_, a.poles_, merged) + lift(b.num_, b.poles_, merged);
            return from_poles(std::move(n), std::move(merged));
        }
        Poly ad = a.denominator(), bd = b.denominator();
        if (ad == bd) return RationalFunction(a.num_ + b.num_, ad);
        return RationalFunction(a.num_ * bd + b.num_ * ad, ad * bd);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.factored_ && b.factored_)
            return from_poles(a.num_ * b.num_, merge(a.poles_, b.poles_, false));
        return RationalFunction(a.num_ * b.num_, a.denominator() * b.denominator());
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        if (b.num_.degree() == 0) {
            RationalFunction inv = b.factored_ ? RationalFunction(b.denominator())
                                               : RationalFunction(b.den_);
            return a * inv * (F(1) / b.num_.leading());
        }
        return RationalFunction(a.num_ * b.denominator(), a.denominator() * b.num_);
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        if (a.num_ != b.num_) return false;
        if (a.factored_ && b.factored_) return a.poles_ == b.poles_;
        return a.denominator() == b.denominator();
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    RationalFunction derivative() const {
        if (is_zero()) return {};
        if (!factored_) {
            Poly d = den_;
            return RationalFunction(num_.derivative() * d - num_ * d.derivative(), d * d);
        }
        if (poles_.empty()) return RationalFunction(num_.derivative());
        Poly radical(F(1));
        for (const auto& p : poles_) radical = radical.times_linear(p.root);
        Poly n = num_.derivative() * radical;
        for (const auto& p : poles_)
            n -= num_ * radical.divide_linear(p.root) * F(static_cast<long>(p.order));
        PoleList raised = poles_;
        for (auto& p : raised) ++p.order;
        return from_poles(std::move(n), std::move(raised));
    }

    template <class G, class Conv>
    RationalFunction<G> map(Conv conv) const {
        if (factored_) {
            typename RationalFunction<G>::PoleList poles;
            for (const auto& p : poles_) poles.push_back({conv(p.root), p.order});
            return RationalFunction<G>::from_poles(num_.template map<G>(conv), std::move(poles));
        }
        return RationalFunction<G>(num_.template map<G>(conv), den_.template map<G>(conv));
    }

private:
    static F pow_int(F x, int n) {
        F r(1);
        while (n > 0) {
            if (n & 1) r *= x;
            x *= x;
            n >>= 1;
        }
        return r;
    }

    static PoleList merge(const PoleList& a, const PoleList& b, bool take_max) {
        PoleList out;
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && detail::root_less(a[i].root, b[j].root))) {
                out.push_back(a[i++]);
            } else if (i == a.size() || detail::root_less(b[j].root, a[i].root)) {
                out.push_back(b[j++]);
            } else {
                int o = take_max ? std::max(a[i].order, b[j].order) : a[i].order + b[j].order;
                out.push_back({a[i].root, o});
                ++i;
                ++j;
            }
        }
        return out;
    }

    // num over `have` rewritten over the common denominator `target`.
    static Poly lift(const Poly& num, const PoleList& have, const PoleList& target) {
        Poly n = num;
        std::size_t i = 0;
        for (const auto& t : target) {
            int extra = t.order;
            if (i < have.size() && have[i].root == t.root) extra -= have[i++].order;
            for (int k = 0; k < extra; ++k) n = n.times_linear(t.root);
        }
        return n;
    }

    void normalize_factored() {
        std::sort(poles_.begin(), poles_.end(),
                  [](const Pole<F>& a, const Pole<F>& b) { return detail::root_less(a.root, b.root); });
        PoleList merged;
        for (auto& p : poles_) {
            if (p.order < 0) throw std::invalid_argument("negative pole order");
            if (!merged.empty() && merged.back().root == p.root)
                merged.back().order += p.order;
            else
                merged.push_back(p);
        }
        poles_.clear();
        if (num_.is_zero()) return;
        for (auto& p : merged) {
            if constexpr (FieldTraits<F>::exact) {
                while (p.order > 0) {
                    F rem;
                    Poly q = num_.divide_linear(p.root, &rem);
                    if (!FieldTraits<F>::is_zero(rem)) break;
                    num_ = std::move(q);
                    --p.order;
                }
            }
            if (p.order > 0) poles_.push_back(p);
        }
    }

    void normalize_general() {
        if (num_.is_zero()) {
            *this = RationalFunction();
            return;
        }
        if constexpr (FieldTraits<F>::exact) {
            Poly g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_.divmod(g).first;
                den_ = den_.divmod(g).first;
            }
        }
        F lead = den_.leading();
        if (!(lead == F(1))) {
            F inv = F(1) / lead;
            num_ *= inv;
            den_ *= inv;
        }
        if (den_.degree() == 0) {
            den_ = Poly();
            factored_ = true;
            poles_.clear();
        }
    }

    Poly num_;
    Poly den_;
    PoleList poles_;
    bool factored_ = true;
};

using ExactRF = RationalFunction<GaussRat>;
using FloatRF = RationalFunction<Complex>;
using ExactPoly = Polynomial<GaussRat>;
using FloatPoly = Polynomial<Complex>;

inline FloatRF to_float(const ExactRF& f) {
    return f.map<Complex>([](const GaussRat& x) { return x.to_complex(); });
}
inline FloatPoly to_float(const ExactPoly& p) {
    return p.map<Complex>([](const GaussRat& x) { return x.to_complex(); });
}

// f(mu(s)) for mu(s) = (a s + b)/(c s + d).
ExactRF compose_mobius(const ExactRF& f, const GaussRat& a, const GaussRat& b, const GaussRat& c,
                       const GaussRat& d);

}  // namespace opers
