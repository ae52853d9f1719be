#include <benchmark/benchmark.h>

#include <Eigen/QR>

#include "opalg/opalg.hpp"

using namespace opalg;

namespace {

TensorAlgebra square(int n) { return TensorAlgebra(make_algebra({n}), make_algebra({n})); }

// Canonical algebra moved off the block-diagonal by a fixed unitary.
MatrixAlgebra hidden(const std::vector<int>& dims) {
  const MatrixAlgebra base = make_algebra(dims);
  const int n = base.ambient_dim();
  Rng rng(17);
  const Matrix u = Eigen::HouseholderQR<Matrix>(random_gaussian(n, n, rng)).householderQ();
  std::vector<Matrix> span;
  for (const Matrix& b : base.basis()) span.push_back(u * b * u.adjoint());
  return MatrixAlgebra::subalgebra(n, span);
}

}  // namespace

static void BM_SeesawGlobal(benchmark::State& state) {
  const TensorAlgebra t = square(static_cast<int>(state.range(0)));
  SeesawOptions options;
  options.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(seesaw_global(t, 7, options).report.value);
}
BENCHMARK(BM_SeesawGlobal)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Wedderburn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MatrixAlgebra a = hidden({1, n, n});
  for (auto _ : state) benchmark::DoNotOptimize(wedderburn_decompose(a));
}
BENCHMARK(BM_Wedderburn)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_GnsConstruct(benchmark::State& state) {
  const TensorAlgebra t = square(static_cast<int>(state.range(0)));
  const State w = random_state(t.product(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(gns_construct(w, t.product()).carrier_dim);
}
BENCHMARK(BM_GnsConstruct)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_TensorFactorization(benchmark::State& state) {
  const TensorAlgebra t = square(static_cast<int>(state.range(0)));
  const Representation pi = gns_construct(random_state(t.product(), 5), t.product());
  for (auto _ : state) benchmark::DoNotOptimize(check_tensor_factorization(pi, t));
}
BENCHMARK(BM_TensorFactorization)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Decomposition(benchmark::State& state) {
  const TensorAlgebra t = square(static_cast<int>(state.range(0)));
  std::vector<std::pair<double, State>> parts;
  for (std::uint64_t k = 0; k < 3; ++k) {
    parts.emplace_back(1.0 / 3.0, product_state(t, random_pure_state(t.left(), 2 * k + 1),
                                                random_pure_state(t.right(), 2 * k + 2)));
  }
  const State target = mix(parts);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_product_states(target, t, 11).decomposition.residual);
}
BENCHMARK(BM_Decomposition)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_PptCheck(benchmark::State& state) {
  const TensorAlgebra t = square(static_cast<int>(state.range(0)));
  const State w = random_state(t.product(), 9);
  for (auto _ : state) benchmark::DoNotOptimize(ppt_check(w, t).min_eigenvalue);
}
BENCHMARK(BM_PptCheck)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
