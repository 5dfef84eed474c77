// Serial vs OpenMP query batches, and serial vs parallel verification trials.

#include <benchmark/benchmark.h>

#include "gti/batch.hpp"
#include "gti/synthetic.hpp"
#include "gti/verify.hpp"

namespace {

struct Fixture {
    gti::ZipfCorpusSpec spec;
    gti::DualIndex index;
    std::vector<gti::Query> queries;

    Fixture()
    {
        spec.num_docs = 20000;
        spec.vocab = 5000;
        gti::BuildOptions options;
        options.alignment.fill = gti::FillMode::Scaled;
        index = gti::build_index(gti::zipf_corpus(spec), options);
        queries = gti::zipf_queries(spec, 256, 6, 7);
    }
};

auto fixture() -> Fixture const&
{
    static Fixture const f;
    return f;
}

auto config() -> gti::TraversalConfig
{
    gti::TraversalConfig c;
    c.coeffs = {1.0, 0.3, 0.05};
    c.k = 10;
    return c;
}

void BM_BatchSerial(benchmark::State& state)
{
    auto const& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(gti::run_batch_serial(f.queries, f.index, config()));
    }
}

void BM_BatchParallel(benchmark::State& state)
{
    auto const& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(gti::run_batch(f.queries, f.index, config(), static_cast<int>(state.range(0))));
    }
}

void BM_VerifySerial(benchmark::State& state)
{
    gti::VerifyOptions o;
    o.trials = 32;
    o.max_docs = 500;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gti::run_verify_serial(o));
    }
}

void BM_VerifyParallel(benchmark::State& state)
{
    gti::VerifyOptions o;
    o.trials = 32;
    o.max_docs = 500;
    o.threads = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gti::run_verify(o));
    }
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifySerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
