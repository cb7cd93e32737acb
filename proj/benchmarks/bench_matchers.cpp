// Wall time per matcher, with the simulated exchange count and peaks as counters.
#include <benchmark/benchmark.h>

#include "corpus.hpp"
#include "mpcsm/exact_match.hpp"
#include "mpcsm/fft.hpp"
#include "mpcsm/plus.hpp"
#include "mpcsm/question.hpp"
#include "mpcsm/star.hpp"

using namespace mpcsm;

namespace {

void report(benchmark::State& st, const MpcContext& ctx) {
    const auto m = ctx.metrics();
    st.counters["rounds"] = static_cast<double>(m.rounds);
    st.counters["machines"] = static_cast<double>(ctx.machines());
    st.counters["peak_memory"] = static_cast<double>(m.peak_machine_memory_words);
    st.counters["peak_receive"] = static_cast<double>(m.peak_round_receive_words);
}

template <class F>
void run(benchmark::State& st, const char* mode, F&& f) {
    const auto n = static_cast<std::uint64_t>(st.range(0));
    const double x = static_cast<double>(st.range(1)) / 10.0;
    const std::string t = corpus::random_text(n, 4, n);
    const std::string p = corpus::pattern_for_mode(mode, t, n);
    for (auto _ : st) {
        MpcContext ctx(MpcConfig{n, x});
        f(ctx, t, p);
        st.PauseTiming();
        report(st, ctx);
        st.ResumeTiming();
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int lg : {12, 14, 16})
        for (int x10 : {3, 5}) b->Args({1 << lg, x10});
    b->Unit(benchmark::kMillisecond);
}

void BM_ExactSmall(benchmark::State& st) {
    run(st, "exact-small", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(match_small_pattern(c, t, literal_bytes(parse_pattern(p))));
    });
}
void BM_ExactLarge(benchmark::State& st) {
    run(st, "exact", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(match_large_pattern(c, t, literal_bytes(parse_pattern(p)), HashParams::seeded(1)));
    });
}
void BM_Question(benchmark::State& st) {
    run(st, "q", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(match_question(c, t, p));
    });
}
void BM_Plus(benchmark::State& st) {
    run(st, "plus", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(match_plus(c, t, p));
    });
}
void BM_StarDp(benchmark::State& st) {
    run(st, "star-dp", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(star_match_dp(c, t, p));
    });
}
void BM_StarNonprefix(benchmark::State& st) {
    run(st, "star-nonprefix", [](MpcContext& c, const std::string& t, const std::string& p) {
        benchmark::DoNotOptimize(star_match_nonprefix(c, t, p));
    });
}
void BM_Fft(benchmark::State& st) {
    const auto n = static_cast<std::uint64_t>(st.range(0));
    const double x = static_cast<double>(st.range(1)) / 10.0;
    ComplexVector a(n);
    for (std::uint64_t k = 0; k < n; ++k) a[k] = Complex(static_cast<double>(k % 7), 0);
    for (auto _ : st) {
        MpcContext ctx(MpcConfig{n, x});
        benchmark::DoNotOptimize(mpc_fft(ctx, a));
        st.PauseTiming();
        report(st, ctx);
        st.ResumeTiming();
    }
}

}  // namespace

BENCHMARK(BM_ExactSmall)->Apply(sizes);
BENCHMARK(BM_ExactLarge)->Apply(sizes);
BENCHMARK(BM_Question)->Apply(sizes);
BENCHMARK(BM_Plus)->Apply(sizes);
BENCHMARK(BM_StarDp)->Apply(sizes);
BENCHMARK(BM_StarNonprefix)->Apply(sizes);
BENCHMARK(BM_Fft)->Apply(sizes);
BENCHMARK_MAIN();
