#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "opers/oper.hpp"
#include "opers/partial_fractions.hpp"

using namespace opers;
using opers::testing::random_miura;
using opers::testing::small_gauss;
using opers::testing::small_rational;

namespace {

// Strictly upper triangular rational matrices: exp and log are finite sums.
struct Mat {
    int n = 0;
    std::vector<Rational> a;
    explicit Mat(int size = 0) : n(size), a(static_cast<std::size_t>(size) * size) {}
    Rational& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
    const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
    friend Mat operator+(const Mat& x, const Mat& y) {
        Mat z(x.n);
        for (std::size_t k = 0; k < z.a.size(); ++k) z.a[k] = x.a[k] + y.a[k];
        return z;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        Mat z(x.n);
        for (std::size_t k = 0; k < z.a.size(); ++k) z.a[k] = x.a[k] - y.a[k];
        return z;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        Mat z(x.n);
        for (int r = 0; r < x.n; ++r)
            for (int k = 0; k < x.n; ++k)
                for (int c = 0; c < x.n; ++c) z.at(r, c) += x.at(r, k) * y.at(k, c);
        return z;
    }
    friend bool operator==(const Mat& x, const Mat& y) { return x.a == y.a; }
};

Mat scale(const Mat& x, const Rational& c) {
    Mat z(x.n);
    for (std::size_t k = 0; k < z.a.size(); ++k) z.a[k] = x.a[k] * c;
    return z;
}

Mat identity(int n) {
    Mat z(n);
    for (int k = 0; k < n; ++k) z.at(k, k) = 1;
    return z;
}

Mat mat_exp(const Mat& x) {
    Mat out = identity(x.n), term = identity(x.n);
    for (int k = 1; k <= x.n; ++k) {
        term = scale(term * x, Rational(1, k));
        out = out + term;
    }
    return out;
}

Mat mat_log(const Mat& g) {
    Mat y = g - identity(g.n), out(g.n), power = identity(g.n);
    for (int k = 1; k <= g.n; ++k) {
        power = power * y;
        out = out + scale(power, Rational(k % 2 ? 1 : -1, k));
    }
    return out;
}

ExactRF random_rf(std::mt19937& rng, const std::vector<GaussRat>& poles) {
    std::uniform_int_distribution<int> deg(0, 2), ord(0, 1), pick(0, static_cast<int>(poles.size()) - 1);
    std::vector<GaussRat> c;
    for (int k = 0, n = deg(rng); k <= n; ++k) c.push_back(GaussRat(small_rational(rng, 3, 2)));
    ExactRF::PoleList pl;
    if (!poles.empty()) pl.push_back({poles[pick(rng)], ord(rng)});
    return ExactRF::from_poles(ExactPoly(c), pl);
}

GaugeParameter random_gauge(const ModelPtr& m, std::mt19937& rng, const std::vector<GaussRat>& poles,
                            int max_grade) {
    RFVector x(m);
    for (int n = 1; n <= max_grade; ++n)
        for (int i = 0; i < m->dim(n); ++i) x.add(n, i, random_rf(rng, poles));
    return GaugeParameter(x);
}

Connection random_connection(const ModelPtr& m, std::mt19937& rng, const std::vector<GaussRat>& poles) {
    RFVector b(m);
    for (int n = 0; n <= m->cutoff(); ++n)
        for (int i = 0; i < m->dim(n); ++i) b.add(n, i, random_rf(rng, poles));
    b.set_delta(random_rf(rng, poles));
    ExactRF phi;
    for (const auto& p : poles) phi += ExactRF::pole_term(GaussRat(small_rational(rng, 3, 2)), p, 1);
    return Connection(m, phi, b);
}

RFVector scalar_times(const GradedVector<Rational>& x, const ExactRF& f) {
    return to_rf(x).transform([&](const ExactRF& c) -> ExactRF { return c.is_zero() ? ExactRF() : c * f; });
}

}  // namespace

TEST(Bch, MatchesMatrixLogarithmOfProduct) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Mat a(5), b(5);
        for (int r = 0; r < 5; ++r)
            for (int c = r + 1; c < 5; ++c) {
                a.at(r, c) = small_rational(rng);
                b.at(r, c) = small_rational(rng);
            }
        auto br = [](const Mat& x, const Mat& y) { return x * y - y * x; };
        EXPECT_EQ(bch_series(a, b, 4, br), mat_log(mat_exp(a) * mat_exp(b)));
    }
}

TEST(Bch, BernoulliNumbers) {
    EXPECT_EQ(detail::bernoulli(1), Rational(-1, 2));
    EXPECT_EQ(detail::bernoulli(2), Rational(1, 6));
    EXPECT_EQ(detail::bernoulli(4), Rational(-1, 30));
    EXPECT_EQ(detail::bernoulli(12), Rational(-691, 2730));
}

TEST(Gauge, IdentityLeavesConnectionUnchanged) {
    std::mt19937 rng(1);
    auto m = AlgebraModel::build('A', 2, 4);
    Connection c = random_connection(m, rng, {GaussRat(0), GaussRat(1)});
    EXPECT_EQ(gauge_transform(c, GaugeParameter(RFVector(m))), c);
}

TEST(Gauge, SuccessiveGaugesComposeThroughBch) {
    std::mt19937 rng(2);
    for (auto [type, rank] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 2}}) {
        auto m = AlgebraModel::build(type, rank, 4);
        std::vector<GaussRat> poles{GaussRat(0), GaussRat(2)};
        for (int trial = 0; trial < 3; ++trial) {
            Connection c = random_connection(m, rng, poles);
            GaugeParameter g = random_gauge(m, rng, poles, 3), h = random_gauge(m, rng, poles, 3);
            Connection sequential = gauge_transform(gauge_transform(c, g), h);
            Connection combined = gauge_transform(c, compose(h, g));
            EXPECT_EQ(sequential, combined) << m->name();
            EXPECT_EQ(gauge_transform(gauge_transform(c, g), inverse(g)), c);
        }
    }
}

TEST(Gauge, TwistIsPreserved) {
    std::mt19937 rng(3);
    auto m = AlgebraModel::build('A', 1, 5);
    std::vector<GaussRat> poles{GaussRat(1), GaussRat(-1)};
    Connection c = random_connection(m, rng, poles);
    Connection d = gauge_transform(c, random_gauge(m, rng, poles, 6));
    EXPECT_EQ(d.twist, c.twist);
    EXPECT_EQ(d.element().rho(), c.rho_coefficient());
}

TEST(Gauge, LocalRootGaugeOnBareCyclicElement) {
    auto m = AlgebraModel::build('A', 2, 4);
    const GaussRat x(3);
    for (int i = 0; i <= 2; ++i) {
        RFVector shift = scalar_times(m->e(i), ExactRF::pole_term(GaussRat(-1), x, 1));
        Connection out = gauge_transform(Connection::trivial(m), GaugeParameter(shift));
        RFVector expect = scalar_times(m->alpha(i), ExactRF::pole_term(GaussRat(-1), x, 1)) +
                          scalar_times(m->e(i), ExactRF::pole_term(GaussRat(-2), x, 2));
        EXPECT_EQ(out.body, expect);
    }
}

TEST(Gauge, LocalRootGaugeClearsSingleRootMiuraOper) {
    auto m = AlgebraModel::build('A', 2, 4);
    const GaussRat x(GaussRat::ratio(1, 2));
    for (int i = 0; i <= 2; ++i) {
        Connection miura(m, {}, scalar_times(m->alpha(i), ExactRF::pole_term(GaussRat(1), x, 1)));
        RFVector shift = scalar_times(m->e(i), ExactRF::pole_term(GaussRat(-1), x, 1));
        EXPECT_EQ(gauge_transform(miura, GaugeParameter(shift)), Connection::trivial(m));
    }
}

TEST(QuasiCanonical, TrivialConnectionIsAlreadyCanonical) {
    auto m = AlgebraModel::build('A', 2, 6);
    auto q = quasi_canonicalize(Connection::trivial(m));
    for (const auto& v : q.v) EXPECT_TRUE(v.is_zero());
    EXPECT_TRUE(q.factors.empty());
}

TEST(QuasiCanonical, SinglePointCasimir) {
    std::mt19937 rng(4);
    for (auto [type, rank] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 2}, {'D', 4}}) {
        auto m = AlgebraModel::build(type, rank, 3);
        MiuraData d = random_miura(m, rng, 1, 0);
        d.points[0].z = GaussRat(0);
        auto q = quasi_canonicalize(build_miura(d));
        const auto& w = d.points[0].weight;
        WeightTriple shifted = w;
        shifted.level += GaussRat(2 * m->dual_coxeter_number());
        GaussRat c = weight_form(*m, w, shifted) * GaussRat::ratio(1, 2) / GaussRat(m->dual_coxeter_number());
        EXPECT_EQ(q.v1(), ExactRF::pole_term(c, GaussRat(0), 2)) << m->name();
    }
}

TEST(QuasiCanonical, RecursionMatchesClosedFormOnRandomConnections) {
    std::mt19937 rng(5);
    for (auto [type, rank, cutoff] : std::vector<std::tuple<char, int, int>>{{'A', 1, 5}, {'A', 2, 4}, {'D', 4, 3}}) {
        auto m = AlgebraModel::build(type, rank, cutoff);
        for (int trial = 0; trial < 4; ++trial) {
            Connection c = random_connection(m, rng, {GaussRat(0), GaussRat(-1)});
            EXPECT_EQ(quasi_canonicalize(c).v1(), v1_direct(c)) << m->name();
        }
    }
}

TEST(QuasiCanonical, Idempotent) {
    std::mt19937 rng(6);
    auto m = AlgebraModel::build('A', 2, 5);
    auto q = quasi_canonicalize(build_miura(random_miura(m, rng, 2, 1)));
    auto again = quasi_canonicalize(q.reconstruct());
    EXPECT_EQ(again, q);
    EXPECT_TRUE(again.factors.empty());
}

TEST(QuasiCanonical, ResultIsGaugeOfInput) {
    std::mt19937 rng(7);
    auto m = AlgebraModel::build('A', 2, 5);
    Connection c = build_miura(random_miura(m, rng, 2, 1));
    auto q = quasi_canonicalize(c);
    EXPECT_EQ(gauge_transform(c, q.total_gauge()), q.reconstruct());
}

TEST(QuasiCanonical, GaugeEquivalentInputsDifferByResidualGauge) {
    std::mt19937 rng(8);
    for (auto [type, rank, cutoff] : std::vector<std::tuple<char, int, int>>{{'A', 1, 5}, {'A', 2, 5}}) {
        auto m = AlgebraModel::build(type, rank, cutoff);
        MiuraData d = random_miura(m, rng, 2, 1);
        Connection c = build_miura(d);
        GaugeParameter g = random_gauge(m, rng, d.singular_points(), 2);
        auto q1 = quasi_canonicalize(c);
        auto q2 = quasi_canonicalize(gauge_transform(c, g));
        EXPECT_EQ(q1.v1(), q2.v1());
        // exp(f) = G2 g G1^{-1} must lie in exp(a_{>=2}) up to the cutoff
        GaugeParameter f = compose(compose(q2.total_gauge(), g), inverse(q1.total_gauge()));
        std::map<int, ExactRF> shifts;
        for (int n = 1; n <= cutoff; ++n) {
            const auto& dec = m->decomposition(n);
            std::vector<ExactRF> x = m->ambient(f.m, n);
            std::vector<ExactRF> coords(x.size());
            for (int r = 0; r < dec.coords.rows(); ++r)
                for (int k = 0; k < dec.coords.cols(); ++k)
                    if (sgn(dec.coords(r, k)) != 0) coords[r] += x[k] * GaussRat(dec.coords(r, k));
            for (std::size_t k = dec.a_basis.size(); k < coords.size(); ++k) EXPECT_TRUE(coords[k].is_zero());
            for (std::size_t k = 0; k < dec.slots.size(); ++k) {
                if (n == 1) EXPECT_TRUE(coords[k].is_zero());
                else if (!coords[k].is_zero()) shifts[dec.slots[k]] = coords[k];
            }
        }
        EXPECT_EQ(residual_gauge(q1, shifts), q2) << m->name();
    }
}

TEST(ResidualGauge, ZeroAndInverseShifts) {
    std::mt19937 rng(9);
    auto m = AlgebraModel::build('A', 2, 6);
    auto q = quasi_canonicalize(build_miura(random_miura(m, rng, 2, 0)));
    EXPECT_EQ(residual_gauge(q, {}), q);
    std::map<int, ExactRF> f, minus_f;
    for (std::size_t s = 1; s < m->exponents().size(); ++s) {
        f[static_cast<int>(s)] = random_rf(rng, {GaussRat(5)});
        minus_f[static_cast<int>(s)] = -f[static_cast<int>(s)];
    }
    EXPECT_EQ(residual_gauge(residual_gauge(q, f), minus_f), q);
    EXPECT_THROW(residual_gauge(q, {{0, ExactRF(GaussRat(1))}}), std::invalid_argument);
    EXPECT_NO_THROW(residual_gauge(q, {{0, ExactRF(GaussRat(1))}}, true));
}

TEST(ResidualGauge, AgreesWithExplicitGauge) {
    std::mt19937 rng(10);
    for (auto [type, rank, cutoff] : std::vector<std::tuple<char, int, int>>{{'A', 2, 5}, {'D', 4, 5}}) {
        auto m = AlgebraModel::build(type, rank, cutoff);
        MiuraData d = random_miura(m, rng, 2, 0);
        auto q = quasi_canonicalize(build_miura(d));
        std::map<int, ExactRF> f;
        for (std::size_t s = 1; s < m->exponents().size(); ++s)
            f[static_cast<int>(s)] = random_rf(rng, d.singular_points());
        Connection direct = gauge_transform(q.reconstruct(), residual_gauge_parameter(m, f));
        EXPECT_EQ(direct, residual_gauge(q, f).reconstruct()) << m->name();
    }
}

TEST(CoordinateChange, IdentityAndTranslation) {
    std::mt19937 rng(11);
    auto m = AlgebraModel::build('A', 2, 4);
    MiuraData d = random_miura(m, rng, 2, 1);
    auto q = quasi_canonicalize(build_miura(d));
    Connection c = q.reconstruct();
    EXPECT_EQ(change_coordinate(c, Mobius::identity()), c);
    const GaussRat shift(GaussRat::ratio(3, 2));
    auto t = quasi_canonicalize(change_coordinate(c, Mobius(GaussRat(1), shift, GaussRat(0), GaussRat(1))));
    EXPECT_TRUE(t.factors.empty());
    EXPECT_EQ(t.twist, compose_mobius(q.twist, GaussRat(1), shift, GaussRat(0), GaussRat(1)));
    for (std::size_t s = 0; s < q.v.size(); ++s)
        EXPECT_EQ(t.v[s], compose_mobius(q.v[s], GaussRat(1), shift, GaussRat(0), GaussRat(1)));
}

TEST(CoordinateChange, Dilation) {
    std::mt19937 rng(12);
    auto m = AlgebraModel::build('A', 1, 5);
    auto q = quasi_canonicalize(build_miura(random_miura(m, rng, 2, 1)));
    auto t = quasi_canonicalize(change_coordinate(q.reconstruct(), Mobius(GaussRat(2), GaussRat(0), GaussRat(0), GaussRat(1))));
    EXPECT_EQ(t.twist, compose_mobius(q.twist, GaussRat(2), GaussRat(0), GaussRat(0), GaussRat(1)) * GaussRat(2));
    for (std::size_t s = 0; s < q.v.size(); ++s) {
        int j = m->exponents()[s].value;
        EXPECT_EQ(t.v[s], compose_mobius(q.v[s], GaussRat(2), GaussRat(0), GaussRat(0), GaussRat(1)) *
                              pow(GaussRat(2), j + 1));
    }
}

TEST(CoordinateChange, RoundTripAndInvariantV1) {
    std::mt19937 rng(13);
    auto m = AlgebraModel::build('A', 2, 4);
    for (int trial = 0; trial < 3; ++trial) {
        MiuraData d = random_miura(m, rng, 2, 1);
        GaussRat c = small_gauss(rng);
        if (c.is_zero()) c = GaussRat(1);
        Mobius mu(GaussRat(1), small_gauss(rng), c, GaussRat(3));
        if (mu.determinant().is_zero()) continue;
        Connection miura = build_miura(d);
        auto q = quasi_canonicalize(miura);
        Connection back = change_coordinate(change_coordinate(q.reconstruct(), mu), mu.inverse());
        EXPECT_EQ(quasi_canonicalize(back), q);
        // v_1 is gauge invariant, so it transforms as a quadratic differential
        auto moved = quasi_canonicalize(change_coordinate(miura, mu));
        EXPECT_EQ(moved.v1(), mu.pullback(q.v1()) * mu.derivative() * mu.derivative());
    }
}
