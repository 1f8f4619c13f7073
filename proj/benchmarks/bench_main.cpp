#include "blwork/analysis.hpp"
#include "blwork/coefficients.hpp"
#include "blwork/diffeo.hpp"
#include "blwork/model.hpp"
#include "blwork/sequences.hpp"
#include "blwork/surgery.hpp"

#include <benchmark/benchmark.h>

using namespace blwork;

static void BM_Coefficients(benchmark::State& st)
{
    const int m = int(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(build_coefficients({m, m / 2}));
}
BENCHMARK(BM_Coefficients)->Arg(10)->Arg(40)->Arg(160);

static void BM_EvalModel(benchmark::State& st)
{
    auto g = Model::get({int(st.range(0)), int(st.range(0))});
    cplx z(0.3, 1.1);
    for (auto _ : st) {
        benchmark::DoNotOptimize(g->eval(z));
        z += cplx(1e-9, 0);
    }
}
BENCHMARK(BM_EvalModel)->Arg(1)->Arg(8)->Arg(32);

static void BM_EvalModelLarge(benchmark::State& st)
{
    auto g = Model::get({3, 3});
    for (auto _ : st) benchmark::DoNotOptimize(g->eval(cplx(40.0, 2.0)));
}
BENCHMARK(BM_EvalModelLarge);

static void BM_Phi(benchmark::State& st)
{
    DiffeoSpec s({{0, 0}}, {{1, 1}});
    double x = -30.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(s.phi(x));
        x = x > 30.0 ? -30.0 : x + 0.37;
    }
}
BENCHMARK(BM_Phi);

static void BM_SlopeSequence(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(build_lemma_a(0.5, int(st.range(0))));
}
BENCHMARK(BM_SlopeSequence)->Arg(10000)->Arg(100000);

static void BM_CountG11(benchmark::State& st)
{
    FunctionHandle f = model_handle({1, 1});
    for (auto _ : st) benchmark::DoNotOptimize(count_zeros_poles(f, {-5, 5, 0, kTwoPi * double(st.range(0))}));
}
BENCHMARK(BM_CountG11)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_LocateG11(benchmark::State& st)
{
    FunctionHandle f = model_handle({1, 1});
    for (auto _ : st) benchmark::DoNotOptimize(locate_zeros(f, {-3, 3, 0, kTwoPi}));
}
BENCHMARK(BM_LocateG11)->Unit(benchmark::kMillisecond);

static void BM_OdeLattice(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(ode_normalized_pair(OdeCoefficient::expq(1), 0.0, {-2, 2, -4, 4}).max_drift());
}
BENCHMARK(BM_OdeLattice)->Unit(benchmark::kMillisecond);

static void BM_StripMapEval(benchmark::State& st)
{
    StripMap G(0.0, 0.5, false);
    double y = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(G.eval(cplx(1.5, y)));
        y = y > 600.0 ? 0.1 : y + 1.3;
    }
}
BENCHMARK(BM_StripMapEval);

static void BM_SeamsThm3(benchmark::State& st)
{
    auto G = assemble(Flavor::thm3, {});
    for (auto _ : st) benchmark::DoNotOptimize(check_seams(*G));
}
BENCHMARK(BM_SeamsThm3)->Unit(benchmark::kMillisecond);

static void BM_DilatationThm3(benchmark::State& st)
{
    auto G = assemble(Flavor::thm3, {});
    for (auto _ : st) benchmark::DoNotOptimize(dilatation_integral(*G, 1.0, double(st.range(0))).total);
}
BENCHMARK(BM_DilatationThm3)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_NevanlinnaExpExp(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(nevanlinna_model("exp_exp", double(st.range(0))));
}
BENCHMARK(BM_NevanlinnaExpExp)->Arg(30)->Arg(300);
BENCHMARK_MAIN();
