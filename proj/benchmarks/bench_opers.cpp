#include "opers/integrate.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace opers;

namespace {

MiuraData sample_miura(int rank, int cutoff) {
    auto m = AlgebraModel::build('A', rank, cutoff);
    std::vector<GaussRat> weight(rank, GaussRat(0)), other(rank, GaussRat(0));
    weight[0] = GaussRat(1);
    other[rank - 1] = GaussRat::ratio(1, 2);
    return MiuraData{m,
                     {{GaussRat(0), {weight, GaussRat(Rational(-5, 3)), GaussRat(0)}},
                      {GaussRat(Rational(1), Rational(1, 2)), {other, GaussRat(Rational(-7, 4)), GaussRat(0)}},
                      {GaussRat(Rational(-2), Rational(1)), {weight, GaussRat(Rational(1, 3)), GaussRat(0)}}},
                     {{GaussRat(Rational(1, 2), Rational(-3, 2)), 1}}};
}

void BM_Bracket(benchmark::State& state) {
    auto m = AlgebraModel::build('A', static_cast<int>(state.range(0)), 8);
    auto x = m->p_plus(0) + m->p_minus(1), y = m->p_minus_one() + m->p_plus(1);
    for (auto _ : state) benchmark::DoNotOptimize(bracket(x, y));
}
BENCHMARK(BM_Bracket)->Arg(1)->Arg(2)->Arg(3);

void BM_QuasiCanonicalize(benchmark::State& state) {
    MiuraData d = sample_miura(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    Connection c = build_miura(d);
    for (auto _ : state) benchmark::DoNotOptimize(quasi_canonicalize(c));
}
BENCHMARK(BM_QuasiCanonicalize)->Args({1, 4})->Args({1, 8})->Args({2, 4})->Args({2, 8})->Unit(benchmark::kMillisecond);

void BM_RegularityCheck(benchmark::State& state) {
    MiuraData d = sample_miura(static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(regularity_check(d));
}
BENCHMARK(BM_RegularityCheck)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PochhammerIntegral(benchmark::State& state) {
    MiuraData d = sample_miura(2, 4);
    auto q = quasi_canonicalize(build_miura(d));
    Contour c = pochhammer_for(d, 0, 1);
    QuadratureOptions opts;
    opts.abs_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(twisted_integral(d, q, 2, c, opts));
}
BENCHMARK(BM_PochhammerIntegral)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
