#include <benchmark/benchmark.h>

#include "achab/chabauty.hpp"
#include "achab/problem.hpp"

using namespace achab;

namespace {

const ProblemFile& genus2() {
  static ProblemFile f = load_problem(std::string(ACHAB_FIXTURE_DIR) + "/genus2_split.json");
  return f;
}

void frobenius(benchmark::State& state, Execution mode) {
  HyperellipticCurve probe = HyperellipticCurve::from_integers(genus2().inputs.problem.f(), 7, 1);
  int N = static_cast<int>(state.range(0));
  auto curve = HyperellipticCurve::from_integers(genus2().inputs.problem.f(), 7, frobenius_input_precision(probe, N));
  for (auto _ : state) benchmark::DoNotOptimize(frobenius_matrix(curve, N, mode));
}

void locus(benchmark::State& state, Execution mode) {
  static ChabautyEngine engine(genus2().inputs);
  static TypeResult r = engine.solve_type(engine.reduction_types().at(0));
  for (auto _ : state) benchmark::DoNotOptimize(engine.locus(r.annihilator->forms, r.constants, mode));
}

}  // namespace

BENCHMARK_CAPTURE(frobenius, serial, Execution::Serial)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(frobenius, parallel, Execution::Parallel)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(locus, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(locus, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
