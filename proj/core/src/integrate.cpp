#include "opers/integrate.hpp"

#include "opers/partial_fractions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace opers {

namespace {

// Gauss-Kronrod 15/7 abscissae on [-1, 1] (non-negative half).
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Anchor {
    double t;
    Complex z;
    std::vector<Complex> logs;
};

struct SegmentIntegrator {
    const TwistedIntegrand& g;
    const Segment& seg;
    double roundoff_floor;
    int max_depth;
    int panels = 0;

    Complex eval(double t, const Anchor& a) const {
        Complex z = seg.point(t);
        Complex expo(0);
        for (std::size_t i = 0; i < g.points.size(); ++i)
            expo += g.exponents[i] * (a.logs[i] + std::log((z - g.points[i]) / (a.z - g.points[i])));
        return g.f(z) * std::exp(expo) * seg.velocity(t);
    }

    void panel(double lo, double hi, const Anchor& a, double tol, int depth, Complex& sum, double& err) {
        const double mid = (lo + hi) / 2, half = (hi - lo) / 2;
        Complex fc = eval(mid, a);
        Complex kron = fc * kKronrod[7], gauss = fc * kGauss[3];
        double absint = std::abs(fc) * kKronrod[7];
        for (int k = 0; k < 7; ++k) {
            Complex f1 = eval(mid - half * kNodes[k], a), f2 = eval(mid + half * kNodes[k], a);
            kron += (f1 + f2) * kKronrod[k];
            absint += (std::abs(f1) + std::abs(f2)) * kKronrod[k];
            if (k % 2 == 1) gauss += (f1 + f2) * kGauss[k / 2];
        }
        kron *= half;
        gauss *= half;
        double e = std::abs(kron - gauss);
        if (e <= std::max(tol, roundoff_floor * absint * half)) {
            ++panels;
            sum += kron;
            err += e;
            return;
        }
        if (depth >= max_depth) throw std::runtime_error("adaptive quadrature did not converge");
        panel(lo, mid, a, tol / 2, depth + 1, sum, err);
        panel(mid, hi, a, tol / 2, depth + 1, sum, err);
    }
};

std::vector<Complex> located_poles(const ExactRF& f, const std::vector<GaussRat>& candidates) {
    std::vector<Complex> out;
    if (f.is_zero() || f.is_polynomial()) return out;
    std::optional<ExactRF> factored = f.is_factored() ? std::optional<ExactRF>(f) : f.with_poles(candidates);
    if (!factored) throw std::invalid_argument("integrand has poles away from the singular points");
    for (const auto& p : factored->poles()) out.push_back(p.root.to_complex());
    return out;
}

}  // namespace

IntegralResult integrate_twisted(const TwistedIntegrand& g, const Contour& c, const QuadratureOptions& opts) {
    BranchOptions bopts = opts.branch;
    for (const auto& p : g.f_poles) {
        bool puncture = false;
        for (const auto& z : g.points) puncture = puncture || std::abs(p - z) == 0;
        if (!puncture) bopts.avoid.push_back(p);
        if (c.distance_to(p) < 1e-12) throw std::invalid_argument("integrand has a pole on the contour");
    }
    BranchTrack track = branch_track(g.points, g.exponents, c, bopts);

    IntegralResult out;
    out.segments = static_cast<int>(c.segments.size());
    if (c.is_closed(1e-9)) {
        ClosureResult cl = closure_check(track);
        out.multiplier = cl.multiplier;
        out.valid = cl.pass;
        if (!cl.pass && opts.require_closure)
            throw std::runtime_error("branch of the twist does not close up along the contour");
    }
    if (c.segments.empty()) return out;

    const double seg_tol = opts.abs_tol / static_cast<double>(c.segments.size());
    std::size_t k = 0;
    for (std::size_t s = 0; s < c.segments.size(); ++s) {
        const Segment& seg = c.segments[s];
        std::vector<Anchor> anchors;
        anchors.push_back({0.0, track.samples[k].z, track.samples[k].logs});
        while (k + 1 < track.samples.size() && track.samples[k + 1].segment == static_cast<int>(s)) {
            ++k;
            anchors.push_back({track.samples[k].t, track.samples[k].z, track.samples[k].logs});
        }
        SegmentIntegrator integ{g, seg, opts.roundoff_floor, opts.max_depth};
        Complex sum(0);
        double err = 0;
        for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
            double lo = anchors[a].t, hi = anchors[a + 1].t;
            integ.panel(lo, hi, anchors[a], seg_tol * (hi - lo), 0, sum, err);
        }
        out.value += sum;
        out.error += err;
        out.panels += integ.panels;
    }
    return out;
}

Complex twisted_boundary_term(const TwistedIntegrand& g, const Contour& c, const BranchOptions& opts) {
    BranchTrack track = branch_track(g.points, g.exponents, c, opts);
    const auto& first = track.samples.front();
    const auto& last = track.samples.back();
    return g.f(last.z) * std::exp(last.value) - g.f(first.z) * std::exp(first.value);
}

TwistedIntegrand twisted_integrand(const MiuraData& d, const GaussRat& s, const ExactRF& f) {
    TwistedIntegrand g;
    for (const auto& p : d.points) {
        g.points.push_back(p.z.to_complex());
        g.exponents.push_back((s * p.weight.level).to_complex());
    }
    if (f.is_zero()) {
        g.f = [](Complex) { return Complex(0); };
        return g;
    }
    // Evaluating through partial fractions avoids cancellation in the expanded numerator near poles.
    auto pf = partial_fractions(f, d.singular_points());
    struct Term {
        Complex pole, coeff;
        int order;
    };
    std::vector<Term> terms;
    for (const auto& t : pf.terms) {
        terms.push_back({t.pole.to_complex(), t.coeff.to_complex(), t.order});
        if (std::find(g.f_poles.begin(), g.f_poles.end(), terms.back().pole) == g.f_poles.end())
            g.f_poles.push_back(terms.back().pole);
    }
    FloatPoly poly = to_float(pf.polynomial_part);
    g.f = [poly, terms](Complex z) {
        Complex v = poly(z);
        for (const auto& t : terms) v += t.coeff / std::pow(z - t.pole, t.order);
        return v;
    };
    return g;
}

int exponent_slot(const AlgebraModel& model, int r, int copy) {
    const auto& slots = model.exponents();
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].value == r && slots[i].copy == copy) return static_cast<int>(i);
    throw std::invalid_argument("not an exponent within the cutoff");
}

IntegralResult twisted_integral(const MiuraData& d, const QuasiCanonicalForm& q, int r, const Contour& c,
                                const QuadratureOptions& opts, int copy) {
    if (q.twist != twist_function(d)) throw std::invalid_argument("quasi-canonical form does not match the data");
    const int slot = exponent_slot(*q.model, r, copy);
    const GaussRat s = GaussRat::ratio(-r, q.model->dual_coxeter_number());
    return integrate_twisted(twisted_integrand(d, s, q.v[slot]), c, opts);
}

GaugeProbe gauge_invariance_probe(const MiuraData& d, const QuasiCanonicalForm& q, int r, const Contour& c,
                                  const ExactRF& f, const QuadratureOptions& opts, int copy) {
    const int slot = exponent_slot(*q.model, r, copy);
    for (const auto& p : located_poles(f, d.singular_points()))
        if (c.distance_to(p) < 1e-12) throw std::invalid_argument("gauge parameter has a pole on the contour");
    QuasiCanonicalForm gauged = residual_gauge(q, {{slot, f}}, r == 1);
    GaugeProbe probe;
    probe.before = twisted_integral(d, q, r, c, opts, copy);
    probe.after = twisted_integral(d, gauged, r, c, opts, copy);
    probe.delta = std::abs(probe.after.value - probe.before.value);
    return probe;
}

IntegralResult stokes_check(const MiuraData& d, int j, const ExactRF& f, const Contour& c,
                            const QuadratureOptions& opts) {
    const GaussRat hv(d.model->dual_coxeter_number());
    const ExactRF exact = f.derivative() - twist_function(d) * f * (GaussRat(j) / hv);
    return integrate_twisted(twisted_integrand(d, GaussRat(-j) / hv, exact), c, opts);
}

Complex twisted_residue(const MiuraData& d, const GaussRat& s, const ExactRF& v, const GaussRat& w,
                        const std::vector<Complex>& logs_at_w) {
    int order = 0;
    if (v.is_zero()) return 0;
    auto laurent = laurent_coefficients(v, w, v.pole_order(w), &order);
    if (order <= 0) return 0;
    // P^s / P^s(w) = sum_n Q_n (z - w)^n with (n + 1) Q_{n+1} = sum_j g_j Q_{n-j}.
    std::vector<GaussRat> g(order), series(order);
    for (int j = 0; j < order; ++j) {
        GaussRat gj(0);
        for (const auto& p : d.points) {
            GaussRat term = s * p.weight.level;
            GaussRat inv = GaussRat(1) / (w - p.z);
            for (int e = 0; e <= j; ++e) term *= inv;
            gj += (j % 2 ? -term : term);
        }
        g[j] = gj;
    }
    series[0] = GaussRat(1);
    for (int n = 0; n + 1 < order; ++n) {
        GaussRat acc(0);
        for (int j = 0; j <= n; ++j) acc += g[j] * series[n - j];
        series[n + 1] = acc / GaussRat(n + 1);
    }
    GaussRat exact(0);
    for (int k = 1; k <= order; ++k) exact += laurent[order - k] * series[k - 1];
    Complex expo(0);
    for (std::size_t i = 0; i < d.points.size(); ++i)
        expo += (s * d.points[i].weight.level).to_complex() * logs_at_w.at(i);
    return exact.to_complex() * std::exp(expo);
}

std::vector<Complex> continue_logs(const std::vector<Complex>& points, Complex from, Complex to) {
    Contour path;
    path.basepoint = from;
    path.segments.push_back(Segment::line(from, to));
    BranchOptions opts;
    opts.clearance = 0;
    return branch_track(points, std::vector<Complex>(points.size()), path, opts).samples.back().logs;
}

}  // namespace opers
