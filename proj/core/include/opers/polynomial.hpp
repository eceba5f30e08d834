#pragma once

#include "opers/scalar.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace opers {

template <class F>
class Polynomial {
public:
    static constexpr int kZeroDegree = -1;

    Polynomial() = default;
    explicit Polynomial(std::vector<F> ascending) : c_(std::move(ascending)) { trim(); }
    Polynomial(const F& constant) {
        if (!FieldTraits<F>::is_zero(constant)) c_.push_back(constant);
    }

    static Polynomial monomial(const F& coeff, int power) {
        std::vector<F> c(power + 1, F(0));
        c[power] = coeff;
        return Polynomial(std::move(c));
    }
    // z - root
    static Polynomial linear(const F& root) { return Polynomial(std::vector<F>{-root, F(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(int k) const { return k >= 0 && k <= degree() ? c_[k] : F(0); }
    const F& leading() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    F operator()(const F& x) const {
        F acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= x;
            acc += *it;
        }
        return acc;
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator*=(const F& s) {
        if (FieldTraits<F>::is_zero(s)) {
            c_.clear();
            return *this;
        }
        for (auto& x : c_) x *= s;
        return *this;
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const F& s) { return a *= s; }
    friend Polynomial operator*(const F& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> out(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (FieldTraits<F>::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(out));
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<F> out(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * F(static_cast<long>(k));
        return Polynomial(std::move(out));
    }

    // this * (z - root)
    Polynomial times_linear(const F& root) const {
        if (is_zero()) return {};
        std::vector<F> out(c_.size() + 1, F(0));
        for (std::size_t k = 0; k < c_.size(); ++k) {
            out[k + 1] += c_[k];
            out[k] -= c_[k] * root;
        }
        return Polynomial(std::move(out));
    }

    // Synthetic division by (z - root); returns quotient, stores p(root) in remainder.
    Polynomial divide_linear(const F& root, F* remainder = nullptr) const {
        if (c_.empty()) {
            if (remainder) *remainder = F(0);
            return {};
        }
        std::vector<F> q(c_.size() - 1);
        F acc = c_.back();
        for (std::size_t k = c_.size() - 1; k-- > 0;) {
            q[k] = acc;
            acc *= root;
            acc += c_[k];
        }
        if (remainder) *remainder = acc;
        return Polynomial(std::move(q));
    }

    // Coefficients of p(x0 + t) in powers of t.
    Polynomial taylor_shift(const F& x0) const {
        std::vector<F> a = c_;
        int n = static_cast<int>(a.size());
        for (int i = 0; i < n; ++i)
            for (int k = n - 2; k >= i; --k) {
                F t = a[k + 1] * x0;
                a[k] += t;
            }
        return Polynomial(std::move(a));
    }

    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        if (degree() < d.degree()) return {Polynomial(), *this};
        std::vector<F> r = c_;
        std::vector<F> q(c_.size() - d.c_.size() + 1, F(0));
        F inv_lead = F(1) / d.leading();
        for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
            F coef = r[k + d.degree()] * inv_lead;
            q[k] = coef;
            if (FieldTraits<F>::is_zero(coef)) continue;
            for (int j = 0; j <= d.degree(); ++j) r[k + j] -= coef * d.c_[j];
        }
        r.resize(d.c_.size() - 1);
        return {Polynomial(std::move(q)), Polynomial(std::move(r))};
    }

    Polynomial monic() const {
        if (is_zero()) return {};
        return *this * (F(1) / leading());
    }

    template <class G, class Conv>
    Polynomial<G> map(Conv conv) const {
        std::vector<G> out;
        out.reserve(c_.size());
        for (const auto& x : c_) out.push_back(conv(x));
        return Polynomial<G>(std::move(out));
    }

private:
    void trim() {
        while (!c_.empty() && FieldTraits<F>::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<F> c_;
};

template <class F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

template <class F>
Polynomial<F> pow(const Polynomial<F>& p, int n) {
    Polynomial<F> result(F(1)), base = p;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

}  // namespace opers
