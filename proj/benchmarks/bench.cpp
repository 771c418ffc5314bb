#include "rpfree/borel_ss.hpp"
#include "rpfree/checker.hpp"
#include "rpfree/homalg.hpp"

#include <benchmark/benchmark.h>

using namespace rpfree;

static void BM_FactorProduct(benchmark::State& state)
{
    const int r = static_cast<int>(state.range(0));
    std::vector<QuadraticForm> forms;
    for (std::uint64_t code = 0; code < 256; ++code)
        forms.push_back(QuadraticForm::from_code(r, code * 2654435761ULL % QuadraticForm::code_count(r)));
    for (auto _ : state)
        for (const auto& f : forms)
            benchmark::DoNotOptimize(factor_product(f));
}
BENCHMARK(BM_FactorProduct)->Arg(4)->Arg(8)->Arg(10);

static void BM_CommonZero(benchmark::State& state)
{
    const int r = static_cast<int>(state.range(0));
    std::vector<QuadraticForm> forms;
    for (int i = 0; i < 3; ++i)
        forms.push_back(QuadraticForm::from_code(r, (i + 1) * 40503ULL % QuadraticForm::code_count(r)));
    for (auto _ : state)
        benchmark::DoNotOptimize(common_zero(forms, r));
}
BENCHMARK(BM_CommonZero)->Arg(6)->Arg(10);

static void BM_E3Page(benchmark::State& state)
{
    const auto d = catalog("jo_product", {static_cast<int>(state.range(0)), 2});
    for (auto _ : state)
        benchmark::DoNotOptimize(d3_on_squares(turn_page(build_e2(d))));
}
BENCHMARK(BM_E3Page)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_RpProductCohomology(benchmark::State& state)
{
    const auto c = rp_product_complex({3, 5, static_cast<int>(state.range(0))});
    for (auto _ : state)
        for (int n = 0; n <= 8; ++n)
            benchmark::DoNotOptimize(cohomology(c, n));
}
BENCHMARK(BM_RpProductCohomology)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Verify(benchmark::State& state)
{
    const auto d = product(product(catalog("jo_product", {1, 2}), catalog("q8_join", {1})), catalog("z4", {2}));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify(d));
}
BENCHMARK(BM_Verify);
BENCHMARK_MAIN();
