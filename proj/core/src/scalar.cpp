#include "opers/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace opers {

GaussRat& GaussRat::operator+=(const GaussRat& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
    if (sgn(o.im_) == 0) return *this *= o.re_;
    if (sgn(im_) == 0) {
        im_ = re_ * o.im_;
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
}

GaussRat& GaussRat::operator*=(const Rational& r) {
    re_ *= r;
    if (sgn(im_) != 0) im_ *= r;
    return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
    if (o.is_zero()) throw std::domain_error("division by zero scalar");
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        if (sgn(im_) != 0) im_ /= o.re_;
        return *this;
    }
    Rational n = o.norm();
    GaussRat c = o.conj();
    *this *= c;
    re_ /= n;
    im_ /= n;
    return *this;
}

GaussRat pow(const GaussRat& x, int n) {
    if (n < 0) return pow(GaussRat(1) / x, -n);
    GaussRat result(1), base = x;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

Rational parse_decimal(const std::string& s) {
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
    bool neg = false;
    std::size_t pos = 0;
    if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
        neg = mant[0] == '-';
        pos = 1;
    }
    std::string digits;
    long frac = 0;
    bool seen_dot = false;
    for (; pos < mant.size(); ++pos) {
        char c = mant[pos];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad number: " + s);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_dot) ++frac;
        } else {
            throw std::invalid_argument("bad number: " + s);
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad number: " + s);
    mpz_class num(digits, 10);
    exp10 -= frac;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = strip(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_decimal(s.substr(0, slash));
        Rational den = parse_decimal(s.substr(slash + 1));
        if (sgn(den) == 0) throw std::invalid_argument("zero denominator: " + text);
        return num / den;
    }
    return parse_decimal(s);
}

GaussRat parse_gauss(const std::string& text) {
    std::string s = strip(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    if (s.back() != 'i') return GaussRat(parse_rational(s));
    s.pop_back();
    // split at the last sign that is not part of an exponent or the leading sign
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [](const std::string& t) -> Rational {
        if (t.empty() || t == "+") return Rational(1);
        if (t == "-") return Rational(-1);
        return parse_rational(t);
    };
    if (split == std::string::npos) return GaussRat(Rational(0), imag_part(s));
    return GaussRat(parse_rational(s.substr(0, split)), imag_part(s.substr(split)));
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const GaussRat& x) {
    if (x.is_real()) return to_string(x.re());
    std::string im = to_string(x.im());
    if (sgn(x.re()) == 0) return im + "i";
    return to_string(x.re()) + (sgn(x.im()) > 0 ? "+" : "") + im + "i";
}

std::string to_string(const Complex& x) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
    return buf;
}

bool approx_equal(const Complex& a, const Complex& b, double rel_tol, double abs_tol) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(abs_tol, rel_tol * scale);
}

}  // namespace opers
