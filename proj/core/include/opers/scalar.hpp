#pragma once

#include <complex>
#include <ostream>
#include <gmpxx.h>
#include <string>

namespace opers {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Exact backend scalar: a + b i with a, b arbitrary-precision rationals.
class GaussRat {
public:
    GaussRat() = default;
    GaussRat(long v) : re_(v) {}
    GaussRat(const Rational& re) : re_(re) {}
    GaussRat(const Rational& re, const Rational& im) : re_(re), im_(im) {}

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

    static GaussRat i() { return GaussRat(Rational(0), Rational(1)); }
    static GaussRat ratio(long num, long den) {
        Rational q(num, den);
        q.canonicalize();
        return GaussRat(q);
    }

    GaussRat conj() const { return GaussRat(re_, -im_); }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussRat& operator+=(const GaussRat& o);
    GaussRat& operator-=(const GaussRat& o);
    GaussRat& operator*=(const GaussRat& o);
    GaussRat& operator/=(const GaussRat& o);
    GaussRat& operator*=(const Rational& r);

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
    friend GaussRat operator*(GaussRat a, const Rational& b) { return a *= b; }
    friend GaussRat operator*(const Rational& b, GaussRat a) { return a *= b; }
    friend GaussRat operator*(GaussRat a, long b) { return a *= Rational(b); }
    friend GaussRat operator*(long b, GaussRat a) { return a *= Rational(b); }
    GaussRat operator-() const { return GaussRat(-re_, -im_); }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
    // Lexicographic (re, im); only used to canonicalize orderings.
    friend bool operator<(const GaussRat& a, const GaussRat& b) {
        int c = cmp(a.re_, b.re_);
        return c < 0 || (c == 0 && cmp(a.im_, b.im_) < 0);
    }

    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

private:
    Rational re_{0};
    Rational im_{0};
};

// Accepts "p/q", decimals "0.25", "1e-3", and complex forms "a+bi", "bi", "i".
GaussRat parse_gauss(const std::string& text);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
std::string to_string(const GaussRat& x);
std::string to_string(const Complex& x);
GaussRat pow(const GaussRat& x, int n);

template <class F> struct FieldTraits;

template <> struct FieldTraits<GaussRat> {
    static constexpr bool exact = true;
    static bool is_zero(const GaussRat& x) { return x.is_zero(); }
    static GaussRat from_rational(const Rational& r) { return GaussRat(r); }
    static double magnitude(const GaussRat& x) { return std::abs(x.to_complex()); }
};

template <> struct FieldTraits<Complex> {
    static constexpr bool exact = false;
    static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
    static Complex from_rational(const Rational& r) { return {r.get_d(), 0.0}; }
    static double magnitude(const Complex& x) { return std::abs(x); }
};

inline Complex to_float(const GaussRat& x) { return x.to_complex(); }

inline void PrintTo(const GaussRat& x, std::ostream* os) { *os << to_string(x); }

bool approx_equal(const Complex& a, const Complex& b, double rel_tol, double abs_tol = 0.0);

}  // namespace opers
