#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "../support/oracles.hpp"
#include "opers/integrate.hpp"

#include <numbers>

using namespace opers;
using opers::testing::on_shell_placed_root;
using opers::testing::try_pochhammer;
using opers::testing::random_miura;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kTwoPiI(0, 2 * kPi);

GaussRat q(long n, long d = 1) { return GaussRat::ratio(n, d); }

std::vector<Complex> unit_pair() { return {Complex(0), Complex(1)}; }

TwistedIntegrand beta_integrand(Complex a, Complex b) {
    return {unit_pair(), {a - 1.0, b - 1.0}, [](Complex) { return Complex(1); }, {}};
}

// z^{a-1} (z - 1)^{b-1} with principal logs at 1/2 differs from z^{a-1} (1 - z)^{b-1} by e^{i pi (b-1)}.
Complex beta_expected(Complex a, Complex b) {
    return std::exp(Complex(0, kPi) * (b - 1.0)) * opers::testing::pochhammer_beta(a, b);
}

ExactRF random_rf(std::mt19937& rng, const std::vector<GaussRat>& poles, int degree) {
    std::vector<GaussRat> coeffs;
    for (int k = 0; k <= degree; ++k) coeffs.push_back(opers::testing::small_gauss(rng, true));
    ExactRF f{ExactPoly(coeffs)};
    for (const auto& p : poles) f += ExactRF::pole_term(opers::testing::small_gauss(rng, true), p, 1 + rng() % 2);
    return f;
}

std::vector<Complex> marked_points(const MiuraData& d) {
    std::vector<Complex> out;
    for (const auto& p : d.points) out.push_back(p.z.to_complex());
    return out;
}

}  // namespace

TEST(Contour, PochhammerIsClosedWithZeroNetWinding) {
    auto pts = unit_pair();
    Contour c = pochhammer(pts, 0, 1, 0.25, Complex(0.5));
    EXPECT_TRUE(c.is_closed(1e-12));
    EXPECT_NO_THROW(c.check_continuity(1e-12));
    EXPECT_EQ(c.winding, (std::vector<int>{0, 0}));
    EXPECT_EQ(winding_numbers(c, pts), (std::vector<int>{0, 0}));
    Contour loop = loop_around(pts[0], 0.25, Complex(0.5), +1, pts, 0);
    EXPECT_EQ(winding_numbers(loop, pts), (std::vector<int>{1, 0}));
    EXPECT_EQ(winding_numbers(loop.reversed(), pts), (std::vector<int>{-1, 0}));
}

TEST(Contour, PochhammerPreconditions) {
    auto pts = unit_pair();
    EXPECT_THROW(pochhammer(pts, 0, 1, 0.5, Complex(0.5)), std::invalid_argument);
    EXPECT_THROW(pochhammer(pts, 0, 1, 0.2, Complex(0.5, 0.1)), std::invalid_argument);
    EXPECT_THROW(pochhammer(pts, 0, 0, 0.2, Complex(0.5)), std::invalid_argument);
    std::vector<Complex> crowded = {Complex(0), Complex(1), Complex(0.1, 0.05)};
    EXPECT_THROW(pochhammer(crowded, 0, 1, 0.2, Complex(0.5)), std::invalid_argument);
}

TEST(Contour, ClearanceViolationIsReported) {
    auto pts = unit_pair();
    Contour c = loop_around(pts[0], 0.25, Complex(0.5), +1, pts, 0);
    BranchOptions opts;
    opts.avoid = {Complex(0.25, 1e-6)};
    EXPECT_THROW(branch_track(pts, {Complex(0.5), Complex(0.5)}, c, opts), std::runtime_error);
}

TEST(Contour, SingleLoopMultiplier) {
    auto pts = unit_pair();
    Contour c = loop_around(pts[0], 0.25, Complex(0.5), +1, pts, 0);
    Complex e(0.3, -0.2);
    ClosureResult r = closure_check(branch_track(pts, {e, Complex(0.7)}, c));
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(std::abs(r.multiplier - std::exp(kTwoPiI * e)), 0, 1e-12);
    EXPECT_TRUE(closure_check(branch_track(pts, {Complex(3), Complex(0.7)}, c)).pass);
}

TEST(Contour, CommutatorClosesForEveryExponent) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Complex> pts = {Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
        std::vector<Complex> ex = {Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
        Contour c;
        try {
            c = pochhammer(pts, 0, 1, 0.2 * std::abs(pts[0] - pts[1]), (pts[0] + pts[1]) / 2.0);
        } catch (const std::invalid_argument&) {
            continue;
        }
        ClosureResult r = closure_check(branch_track(pts, ex, c));
        EXPECT_TRUE(r.pass);
        EXPECT_LT(std::abs(r.multiplier - 1.0), 1e-12);
    }
}

TEST(Contour, ReversalNegatesDiscrepancy) {
    auto pts = unit_pair();
    std::vector<Complex> ex = {Complex(0.3, 0.4), Complex(-1.7, 0.2)};
    Contour c = loop_around(pts[0], 0.25, Complex(0.5), +1, pts, 0)
                    .then(loop_around(pts[1], 0.3, Complex(0.5), -1, pts, 1));
    Complex fwd = branch_track(pts, ex, c).discrepancy, back = branch_track(pts, ex, c.reversed()).discrepancy;
    EXPECT_LT(std::abs(fwd + back), 1e-12);
}

TEST(Integrate, ZeroIntegrand) {
    auto m = AlgebraModel::build('A', 1, 3);
    MiuraData d{m, {{GaussRat(0), {{q(1)}, q(1, 2), GaussRat(0)}}, {GaussRat(1), {{q(0)}, q(1, 3), GaussRat(0)}}}, {}};
    auto r = integrate_twisted(twisted_integrand(d, q(-1, 2), ExactRF()), pochhammer(unit_pair(), 0, 1, 0.25, 0.5));
    EXPECT_EQ(r.value, Complex(0));
    EXPECT_TRUE(r.valid);
}

TEST(Integrate, PochhammerBeta) {
    Contour c = pochhammer(unit_pair(), 0, 1, 0.25, Complex(0.5));
    for (auto [a, b] : {std::pair{Complex(1.0 / 3), Complex(0.5)}, std::pair{Complex(0.3, 0.1), Complex(0.45)},
                        std::pair{Complex(2.5, -0.4), Complex(-0.7, 0.2)}}) {
        auto r = integrate_twisted(beta_integrand(a, b), c);
        EXPECT_TRUE(r.valid);
        EXPECT_GE(r.error, 0);
        EXPECT_LT(std::abs(r.value - beta_expected(a, b)), 1e-8) << a << " " << b;
    }
}

TEST(Integrate, BetaThroughQuasiCanonicalData) {
    // A1 with r = 1: P^{-1/2} = z^{a-1} (z-1)^{b-1} when the levels are 2(1-a) and 2(1-b).
    auto m = AlgebraModel::build('A', 1, 2);
    GaussRat a = GaussRat(Rational(3, 10), Rational(1, 10)), b = q(9, 20);
    MiuraData d{m, {{GaussRat(0), {{q(0)}, GaussRat(2) * (GaussRat(1) - a), GaussRat(0)}},
                    {GaussRat(1), {{q(0)}, GaussRat(2) * (GaussRat(1) - b), GaussRat(0)}}}, {}};
    QuasiCanonicalForm qc;
    qc.model = m;
    qc.twist = twist_function(d);
    qc.v.assign(m->exponents().size(), ExactRF());
    qc.v[exponent_slot(*m, 1)] = ExactRF(GaussRat(1));
    auto r = twisted_integral(d, qc, 1, pochhammer(unit_pair(), 0, 1, 0.25, 0.5));
    EXPECT_LT(std::abs(r.value - beta_expected(a.to_complex(), b.to_complex())), 1e-8);
}

TEST(Integrate, IntegerExponentsVanish) {
    Contour c = pochhammer(unit_pair(), 0, 1, 0.3, Complex(0.5));
    for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{4, 1}}) {
        Complex expected = opers::testing::pochhammer_beta(Complex(a), Complex(b));
        EXPECT_LT(std::abs(expected), 1e-12);
        EXPECT_LT(std::abs(integrate_twisted(beta_integrand(a, b), c).value), 1e-10);
    }
}

TEST(Integrate, HalvingTheTargetStaysWithinTheEstimate) {
    Contour c = pochhammer(unit_pair(), 0, 1, 0.25, Complex(0.5));
    for (auto [a, b] : {std::pair{Complex(1.0 / 3), Complex(0.5)}, std::pair{Complex(0.3, 0.1), Complex(0.45)}}) {
        QuadratureOptions coarse, fine;
        coarse.abs_tol = 1e-8;
        fine.abs_tol = 0.5e-8;
        auto r1 = integrate_twisted(beta_integrand(a, b), c, coarse);
        auto r2 = integrate_twisted(beta_integrand(a, b), c, fine);
        EXPECT_LE(std::abs(r1.value - r2.value), r1.error + 1e-14);
    }
}

TEST(Integrate, ReversedContourNegates) {
    Contour c = pochhammer(unit_pair(), 0, 1, 0.25, Complex(0.5));
    auto g = beta_integrand(Complex(0.2, 0.3), Complex(0.6));
    EXPECT_LT(std::abs(integrate_twisted(g, c).value + integrate_twisted(g, c.reversed()).value), 1e-10);
}

TEST(Integrate, OpenLoopIsFlaggedOrRejected) {
    auto g = beta_integrand(Complex(0.2), Complex(0.6));
    Contour loop = loop_around(0, 0.25, Complex(0.5), +1, unit_pair(), 0);
    EXPECT_THROW(integrate_twisted(g, loop), std::runtime_error);
    QuadratureOptions lenient;
    lenient.require_closure = false;
    auto r = integrate_twisted(g, loop, lenient);
    EXPECT_FALSE(r.valid);
    EXPECT_LT(std::abs(r.multiplier - std::exp(kTwoPiI * 0.2 * -4.0)), 1e-12);
}

TEST(Integrate, PoleOnContourIsRejected) {
    TwistedIntegrand g = beta_integrand(Complex(0.2), Complex(0.6));
    g.f_poles = {Complex(0.5)};
    EXPECT_THROW(integrate_twisted(g, pochhammer(unit_pair(), 0, 1, 0.25, Complex(0.5))), std::invalid_argument);
}

TEST(Stokes, ConstantWithoutTwistIsZero) {
    auto m = AlgebraModel::build('A', 1, 2);
    MiuraData d{m, {{GaussRat(0), {{q(1)}, GaussRat(0), GaussRat(0)}}, {GaussRat(1), {{q(0)}, GaussRat(0), GaussRat(0)}}}, {}};
    auto r = stokes_check(d, 1, ExactRF(q(5)), pochhammer(unit_pair(), 0, 1, 0.25, 0.5));
    EXPECT_EQ(r.value, Complex(0));
}

TEST(Stokes, ExactDerivativesIntegrateToZero) {
    std::mt19937 rng(32);
    int checked = 0;
    for (int trial = 0; checked < 20 && trial < 200; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, 3);
        auto d = random_miura(m, rng, 2 + trial % 2, trial % 2, true);
        auto c = try_pochhammer(d, 0, 1);
        if (!c) continue;
        ExactRF f = random_rf(rng, d.singular_points(), 3);
        auto r = stokes_check(d, 1 + trial % 3, f, *c);
        EXPECT_TRUE(r.valid);
        EXPECT_LT(std::abs(r.value), 1e-9) << trial;
        ++checked;
    }
    EXPECT_EQ(checked, 20);
}

TEST(Stokes, OpenPathMatchesTheBoundaryTerm) {
    std::mt19937 rng(33);
    auto m = AlgebraModel::build('A', 2, 3);
    for (int trial = 0; trial < 10; ++trial) {
        auto d = random_miura(m, rng, 2, 0, true);
        auto pts = marked_points(d);
        Complex mid = (pts[0] + pts[1]) / 2.0;
        double r = 0.3 * std::abs(pts[0] - pts[1]);
        Contour loop = loop_around(pts[0], r, mid, +1, pts, 0);
        Contour path;
        path.basepoint = mid;
        path.segments = {loop.segments[0], loop.segments[1]};
        ExactRF f = random_rf(rng, d.singular_points(), 2);
        int j = 1 + trial % 3;
        auto result = stokes_check(d, j, f, path);
        GaussRat s = GaussRat(-j) / GaussRat(m->dual_coxeter_number());
        Complex boundary = twisted_boundary_term(twisted_integrand(d, s, f), path);
        EXPECT_LT(std::abs(result.value - boundary), 1e-9 * (1 + std::abs(boundary)));
    }
}

TEST(Gauge, ResidualGaugeLeavesPochhammerIntegralUnchanged) {
    std::mt19937 rng(34);
    auto m = AlgebraModel::build('A', 2, 4);
    int checked = 0;
    for (int trial = 0; checked < 6 && trial < 100; ++trial) {
        auto d = random_miura(m, rng, 2, 1, true);
        auto c = try_pochhammer(d, 0, 1);
        if (!c) continue;
        auto qc = quasi_canonicalize(build_miura(d));
        for (int r : {2, 4}) {
            ExactRF f = random_rf(rng, d.singular_points(), 4);
            auto probe = gauge_invariance_probe(d, qc, r, *c, f);
            EXPECT_LT(probe.delta, 1e-8 * std::max(1.0, std::abs(probe.before.value))) << trial << " r=" << r;
            EXPECT_EQ(gauge_invariance_probe(d, qc, r, *c, ExactRF()).delta, 0.0);
        }
        ++checked;
    }
    EXPECT_EQ(checked, 6);
}

TEST(Gauge, GaugeParameterWithInteriorPoleStillCancels) {
    std::mt19937 rng(35);
    auto m = AlgebraModel::build('A', 2, 2);
    auto d = random_miura(m, rng, 2, 0, true);
    auto c = try_pochhammer(d, 0, 1);
    ASSERT_TRUE(c);
    auto qc = quasi_canonicalize(build_miura(d));
    // A pole inside the circle around z_0 that is not a marked point.
    auto pts = marked_points(d);
    GaussRat inside = d.points[0].z + (d.points[1].z - d.points[0].z) * q(1, 20);
    ExactRF f = ExactRF::pole_term(q(1), inside, 1) + ExactRF::pole_term(q(2, 3), inside, 2);
    ExactRF v = qc.v[exponent_slot(*m, 2)];
    QuasiCanonicalForm gauged = residual_gauge(qc, {{exponent_slot(*m, 2), f}});
    EXPECT_NE(gauged.v[exponent_slot(*m, 2)], v);
    // The difference is an exact twisted derivative, so its cycle integral vanishes.
    auto before = twisted_integral(d, qc, 2, *c);
    auto after = twisted_integral(d, gauged, 2, *c);
    EXPECT_LT(std::abs(after.value - before.value), 1e-8 * std::max(1.0, std::abs(before.value)));
}

TEST(Residue, SeriesMatchesSmallCircle) {
    std::mt19937 rng(36);
    auto m = AlgebraModel::build('A', 1, 2);
    for (int trial = 0; trial < 8; ++trial) {
        auto d = random_miura(m, rng, 2, 1, true);
        auto pts = marked_points(d);
        Complex base = (pts[0] + pts[1]) / 2.0, w = d.roots[0].w.to_complex();
        double rho = 0.3 * std::min({std::abs(w - pts[0]), std::abs(w - pts[1])});
        if (Segment::line(base, w).distance_to(pts[0]) < 2 * rho ||
            Segment::line(base, w).distance_to(pts[1]) < 2 * rho || std::abs(w - base) < 2 * rho)
            continue;
        ExactRF v = ExactRF::pole_term(q(1), d.roots[0].w, 3) + ExactRF::pole_term(q(-2, 3), d.roots[0].w, 1) +
                    ExactRF::pole_term(q(1), d.points[0].z, 1);
        GaussRat s(Rational(-1, 3), Rational(1, 5));
        auto g = twisted_integrand(d, s, v);
        auto numeric = integrate_twisted(g, loop_around(w, rho, base, +1, pts, -1)).value;
        Complex expected = kTwoPiI * twisted_residue(d, s, v, d.roots[0].w, continue_logs(pts, base, w));
        EXPECT_LT(std::abs(numeric - expected), 1e-9 * (1 + std::abs(expected))) << trial;
    }
}

TEST(Deformation, DetourAroundOnShellRootChangesNothing) {
    std::mt19937 rng(37);
    auto m = AlgebraModel::build('A', 2, 3);
    int checked = 0;
    for (int trial = 0; checked < 4 && trial < 200; ++trial) {
        auto d = on_shell_placed_root(m, rng, trial % 3);
        ASSERT_TRUE(bethe_residuals(d)[0].is_zero());
        auto c = try_pochhammer(d, 0, 1);
        if (!c) continue;
        auto pts = marked_points(d);
        Complex base = c->basepoint, w = d.roots[0].w.to_complex();
        double rho = 0.3 * std::min(std::abs(w - pts[0]), std::abs(w - pts[1]));
        if (Segment::line(base, w).distance_to(pts[0]) < rho || Segment::line(base, w).distance_to(pts[1]) < rho ||
            std::abs(w - base) < 2 * rho)
            continue;
        Contour detoured = c->then(loop_around(w, rho, base, +1, pts, -1));
        auto qc = quasi_canonicalize(build_miura(d));
        for (int r : {1, 2}) {
            Complex i1 = twisted_integral(d, qc, r, *c).value, i2 = twisted_integral(d, qc, r, detoured).value;
            EXPECT_LT(std::abs(i2 - i1), 1e-8) << trial << " r=" << r;
        }
        ++checked;
    }
    EXPECT_EQ(checked, 4);
}

TEST(Deformation, DetourAroundOffShellRootPicksUpTheResidue) {
    std::mt19937 rng(38);
    auto m = AlgebraModel::build('A', 2, 3);
    int checked = 0;
    for (int trial = 0; checked < 4 && trial < 200; ++trial) {
        auto d = on_shell_placed_root(m, rng, trial % 3);
        d.roots[0].w += GaussRat(Rational(1, 7), Rational(1, 11));
        if (bethe_residuals(d)[0].is_zero()) continue;
        auto c = try_pochhammer(d, 0, 1);
        if (!c) continue;
        auto pts = marked_points(d);
        Complex base = c->basepoint, w = d.roots[0].w.to_complex();
        double rho = 0.3 * std::min(std::abs(w - pts[0]), std::abs(w - pts[1]));
        if (Segment::line(base, w).distance_to(pts[0]) < rho || Segment::line(base, w).distance_to(pts[1]) < rho ||
            std::abs(w - base) < 2 * rho)
            continue;
        Contour detoured = c->then(loop_around(w, rho, base, +1, pts, -1));
        auto qc = quasi_canonicalize(build_miura(d));
        auto logs = continue_logs(pts, base, w);
        for (int r : {1, 2}) {
            GaussRat s = GaussRat(-r) / GaussRat(m->dual_coxeter_number());
            Complex jump = twisted_integral(d, qc, r, detoured).value - twisted_integral(d, qc, r, *c).value;
            Complex predicted = kTwoPiI * twisted_residue(d, s, qc.v[exponent_slot(*m, r)], d.roots[0].w, logs);
            if (r == 1) EXPECT_GT(std::abs(predicted), 1e-6);
            EXPECT_LT(std::abs(jump - predicted), 1e-8) << trial << " r=" << r;
        }
        ++checked;
    }
    EXPECT_EQ(checked, 4);
}
