#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "opers/io.hpp"
#include "opers/verify.hpp"

using namespace opers;
using opers::testing::random_miura;

TEST(Io, ModelRoundTrip) {
    auto m = io::model_from_json(R"({"type":"A","rank":2,"cutoff":12})");
    EXPECT_EQ(m->name(), AlgebraModel::build('A', 2, 12)->name());
    EXPECT_EQ(m->cutoff(), 12);
    EXPECT_EQ(io::model_from_json(io::model_to_json(*m))->exponent_values(), m->exponent_values());
}

TEST(Io, MiuraDataInTheDocumentedShape) {
    auto m = AlgebraModel::build('A', 1, 3);
    MiuraData d = io::miura_from_json(
        R"({"points":[{"z":"0","weight":{"lambda_dot":["1"],"level":"2","delta":"0"}}],"bethe_roots":[{"w":"1/2","color":1}]})",
        m);
    ASSERT_EQ(d.points.size(), 1u);
    EXPECT_EQ(d.points[0].weight.level, GaussRat(2));
    EXPECT_EQ(d.roots[0].w, GaussRat::ratio(1, 2));
    EXPECT_EQ(d.roots[0].color, 1);
    EXPECT_THROW(io::miura_from_json(R"({"points":[]})"), std::invalid_argument);
}

TEST(Io, MiuraDataRoundTrip) {
    std::mt19937 rng(41);
    auto m = AlgebraModel::build('A', 2, 3);
    for (int trial = 0; trial < 5; ++trial) {
        MiuraData d = random_miura(m, rng, 3, 2, true);
        MiuraData back = io::miura_from_json(io::miura_to_json(d), m);
        ASSERT_EQ(back.points.size(), d.points.size());
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            EXPECT_EQ(back.points[i].z, d.points[i].z);
            EXPECT_EQ(back.points[i].weight.lambda_dot, d.points[i].weight.lambda_dot);
            EXPECT_EQ(back.points[i].weight.level, d.points[i].weight.level);
            EXPECT_EQ(back.points[i].weight.delta_shift, d.points[i].weight.delta_shift);
        }
        for (std::size_t j = 0; j < d.roots.size(); ++j) {
            EXPECT_EQ(back.roots[j].w, d.roots[j].w);
            EXPECT_EQ(back.roots[j].color, d.roots[j].color);
        }
    }
}

TEST(Io, ContourInTheDocumentedShape) {
    Contour c = io::contour_from_json(
        R"({"segments":[{"kind":"line","from":"1/2","to":"1/4"},
                        {"kind":"arc","center":"0","radius":"1/4","from_angle":0,"to_angle":6.283185307179586},
                        {"kind":"line","from":"1/4","to":"1/2"}],"basepoint":"1/2"})");
    EXPECT_EQ(c.segments.size(), 3u);
    EXPECT_TRUE(c.is_closed(1e-12));
    EXPECT_EQ(winding_numbers(c, {Complex(0), Complex(1)}), (std::vector<int>{1, 0}));
    EXPECT_THROW(io::contour_from_json(R"({"segments":[{"kind":"line","from":0,"to":1},{"kind":"line","from":2,"to":3}]})"),
                 std::invalid_argument);
}

TEST(Io, ContourRoundTripIsExact) {
    Contour c = pochhammer({Complex(0), Complex(1, 1)}, 0, 1, 0.3, Complex(0.5, 0.5));
    Contour back = io::contour_from_json(io::contour_to_json(c));
    ASSERT_EQ(back.segments.size(), c.segments.size());
    for (std::size_t k = 0; k < c.segments.size(); ++k)
        for (double t : {0.0, 0.37, 1.0}) EXPECT_EQ(back.segments[k].point(t), c.segments[k].point(t));
    EXPECT_EQ(back.winding, c.winding);
}

TEST(Io, ConnectionRoundTrip) {
    std::mt19937 rng(42);
    auto m = AlgebraModel::build('A', 2, 3);
    MiuraData d = random_miura(m, rng, 2, 1, true);
    Connection c = build_miura(d);
    EXPECT_EQ(io::connection_from_json(io::connection_to_json(c), m), c);
    auto q = quasi_canonicalize(c);
    Connection r = q.reconstruct();
    EXPECT_EQ(io::connection_from_json(io::connection_to_json(r), m), r);
    EXPECT_NE(io::quasi_canonical_to_json(q).find("\"2\""), std::string::npos);
}

TEST(Io, RationalFunctionRoundTrip) {
    ExactRF f = ExactRF::pole_term(GaussRat(Rational(1, 3), Rational(-2)), GaussRat::ratio(1, 2), 2) +
                ExactRF(ExactPoly(std::vector<GaussRat>{GaussRat(1), GaussRat(0), GaussRat::ratio(5, 7)}));
    EXPECT_EQ(io::rf_from_json(io::rf_to_json(f)), f);
    ExactRF g(ExactPoly(std::vector<GaussRat>{GaussRat(1)}), ExactPoly(std::vector<GaussRat>{GaussRat(1), GaussRat(0), GaussRat(1)}));
    EXPECT_EQ(io::rf_from_json(io::rf_to_json(g)), g);
}

TEST(Verify, ReportsAreDeterministic) {
    verify::SuiteConfig cfg;
    cfg.canonical_instances = 10;
    auto a = verify::run_suite("canonical", 7, cfg), b = verify::run_suite("canonical", 7, cfg);
    EXPECT_EQ(a.to_json(), b.to_json());
    cfg.parallel = false;
    EXPECT_EQ(verify::run_suite("canonical", 7, cfg).to_json(), a.to_json());
    EXPECT_TRUE(a.pass());
}

TEST(Verify, UnknownSuiteIsAnError) { EXPECT_THROW(verify::run_suite("nope", 1), std::invalid_argument); }

TEST(Verify, AlgebraSuitePasses) {
    auto r = verify::run_suite("algebra", 3);
    EXPECT_TRUE(r.pass()) << r.to_json();
    EXPECT_EQ(r.checks.size(), 4u);
}
