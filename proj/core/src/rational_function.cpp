#include "opers/partial_fractions.hpp"
#include "opers/rational_function.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace opers {

namespace {

// sum_k p_k (a s + b)^k (c s + d)^(deg - k)
ExactPoly homogenized(const ExactPoly& p, int deg, const GaussRat& a, const GaussRat& b,
                      const GaussRat& c, const GaussRat& d) {
    ExactPoly num(std::vector<GaussRat>{b, a});
    ExactPoly den(std::vector<GaussRat>{d, c});
    std::vector<ExactPoly> den_pow(deg + 1);
    den_pow[0] = ExactPoly(GaussRat(1));
    for (int k = 1; k <= deg; ++k) den_pow[k] = den_pow[k - 1] * den;
    ExactPoly out, num_pow(GaussRat(1));
    for (int k = 0; k <= p.degree(); ++k) {
        if (!p.coeff(k).is_zero()) out += num_pow * den_pow[deg - k] * p.coeff(k);
        num_pow = num_pow * num;
    }
    return out;
}

template <class F>
PartialFractions<F> expand_over(const RationalFunction<F>& f) {
    PartialFractions<F> out;
    out.polynomial_part = f.numerator().divmod(f.denominator()).first;
    for (const auto& p : f.poles()) {
        auto c = laurent_coefficients(f, p.root, p.order);
        for (int k = 0; k < p.order; ++k)
            if (!FieldTraits<F>::is_zero(c[k])) out.terms.push_back({p.root, p.order - k, c[k]});
    }
    return out;
}

}  // namespace

ExactRF compose_mobius(const ExactRF& f, const GaussRat& a, const GaussRat& b, const GaussRat& c,
                       const GaussRat& d) {
    if ((a * d - b * c).is_zero()) throw std::invalid_argument("degenerate Moebius map");
    if (f.is_zero()) return f;
    const ExactPoly& n = f.numerator();
    if (!f.is_factored()) {
        int m = f.denominator().degree();
        ExactPoly nn = homogenized(n, n.degree(), a, b, c, d);
        ExactPoly dd = homogenized(f.denominator(), m, a, b, c, d);
        ExactPoly lin(std::vector<GaussRat>{d, c});
        if (m >= n.degree()) nn = nn * pow(lin, m - n.degree());
        else dd = dd * pow(lin, n.degree() - m);
        return ExactRF(nn, dd);
    }
    ExactPoly num = homogenized(n, n.degree(), a, b, c, d);
    GaussRat scale(1);
    ExactRF::PoleList poles;
    int total = 0;
    for (const auto& p : f.poles()) {
        total += p.order;
        GaussRat slope = a - p.root * c;
        GaussRat offset = b - p.root * d;
        if (slope.is_zero()) {
            scale *= pow(offset, p.order);
        } else {
            scale *= pow(slope, p.order);
            poles.push_back({-offset / slope, p.order});
        }
    }
    int excess = total - n.degree();
    if (c.is_zero()) {
        scale /= pow(d, excess);
    } else if (excess > 0) {
        num = num * pow(ExactPoly(std::vector<GaussRat>{d, c}), excess);
    } else if (excess < 0) {
        scale *= pow(c, -excess);
        poles.push_back({-d / c, -excess});
    }
    return ExactRF::from_poles(num * (GaussRat(1) / scale), std::move(poles));
}

PartialFractions<GaussRat> partial_fractions(const ExactRF& f,
                                             const std::vector<GaussRat>& candidates) {
    auto split = f.with_poles(candidates);
    if (!split) throw std::domain_error("denominator does not split over the supplied poles");
    return expand_over(*split);
}

std::vector<Complex> polynomial_roots(const FloatPoly& p) {
    int n = p.degree();
    if (n < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    Complex lead = p.leading();
    for (int k = 0; k < n; ++k) comp(0, k) = -p.coeff(n - 1 - k) / lead;
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    FloatPoly dp = p.derivative();
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            Complex fd = dp(r);
            if (std::abs(fd) == 0.0) break;
            Complex step = p(r) / fd;
            if (!std::isfinite(std::abs(step))) break;
            r -= step;
        }
    }
    return roots;
}

PartialFractions<Complex> partial_fractions(const FloatRF& f, double cluster_tol) {
    if (f.is_factored()) return expand_over(f);
    auto roots = polynomial_roots(f.denominator());
    FloatRF::PoleList poles;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            double scale = std::max(1.0, std::abs(roots[i]));
            if (!used[j] && std::abs(roots[j] - roots[i]) < cluster_tol * scale) {
                used[j] = true;
                sum += roots[j];
                ++count;
            }
        }
        poles.push_back({sum / static_cast<double>(count), count});
    }
    return expand_over(FloatRF::from_poles(f.numerator(), std::move(poles)));
}

}  // namespace opers
