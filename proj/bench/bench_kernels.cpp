// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Forcing
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <random>

#include "elliptic/kernels.hpp"
#include "elliptic/solver.hpp"

using namespace elliptic;

namespace {

struct ForcingInput {
  Field coeff, w, out;
  std::vector<NonlinearityFamily> fs;
};

ForcingInput make_input(std::size_t d, std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> c(0.0, 2.0), v(0.5, 50.0);
  ForcingInput in{Field(d, std::vector<double>(n)), Field(d, std::vector<double>(n)),
                  Field(d, std::vector<double>(n)), {}};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      in.coeff[i][k] = c(rng);
      in.w[i][k] = v(rng);
    }
    in.fs.push_back(i % 2 == 0 ? NonlinearityFamily::log_growth() : NonlinearityFamily::power(1.5));
  }
  return in;
}

template <bool Parallel>
void BM_Forcing(benchmark::State& state) {
  ForcingInput in = make_input(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      forcing_parallel(in.coeff, in.fs, in.w, in.out);
    } else {
      forcing_serial(in.coeff, in.fs, in.w, in.out);
    }
    benchmark::DoNotOptimize(in.out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <Kernel K>
void BM_SolveLower(benchmark::State& state) {
  const ProblemSpec spec(3, {CoefficientFamily::power_decay(1.0, 4.0), CoefficientFamily::gaussian(2.0)},
                         {NonlinearityFamily::log_growth(), NonlinearityFamily::power(0.5)});
  const auto grid =
      std::make_shared<const RadialGrid>(RadialGrid::uniform(20.0, static_cast<std::size_t>(state.range(0))));
  SolveOptions opts;
  opts.kernel = K;
  for (auto _ : state) {
    SolveOutcome out = solve_lower(spec, grid, opts);
    benchmark::DoNotOptimize(out.iterations);
  }
}

void ForcingArgs(benchmark::internal::Benchmark* b) {
  for (std::int64_t d : {1, 4}) {
    for (std::int64_t n : {1 << 12, 1 << 16, 1 << 20}) b->Args({d, n});
  }
}

}  // namespace

BENCHMARK(BM_Forcing<false>)->Name("Forcing/serial")->Apply(ForcingArgs);
BENCHMARK(BM_Forcing<true>)->Name("Forcing/openmp")->Apply(ForcingArgs);
BENCHMARK(BM_SolveLower<Kernel::serial>)->Name("SolveLower/serial")->Arg(4001)->Arg(64001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveLower<Kernel::parallel>)->Name("SolveLower/openmp")->Arg(4001)->Arg(64001)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
