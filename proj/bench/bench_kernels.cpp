// Serial vs OpenMP kernels on the driven spin-flip Hamiltonian.

#include <benchmark/benchmark.h>

#include <random>

#include "tpump/dynamics.hpp"
#include "tpump/models.hpp"

using namespace tpump;

namespace {

StateVector random_state(std::size_t n) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> g;
  StateVector v(Eigen::Index{1} << n);
  for (auto& a : v) a = {g(gen), g(gen)};
  return v.normalized();
}

TimeDependentHamiltonian model(std::size_t n) {
  DriveParams p;
  p.n_sites = n;
  ModelSpec s;
  s.K = 1.0;
  return build_model(s, p);
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_Apply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto H = model(n);
  const StateVector psi = random_state(n);
  StateVector out(psi.size());
  const auto c = H.coefficients(1.0);
  for (auto _ : st) {
    H.compiled().apply(c, {psi.data(), static_cast<std::size_t>(psi.size())},
                       {out.data(), static_cast<std::size_t>(out.size())}, exec_of(st));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_BoundApply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto H = model(n);
  const StateVector psi = random_state(n);
  StateVector out(psi.size());
  const BoundSum b = H.compiled().bind(H.coefficients(1.0), exec_of(st));
  for (auto _ : st) {
    b.apply({psi.data(), static_cast<std::size_t>(psi.size())}, {out.data(), static_cast<std::size_t>(out.size())},
            exec_of(st));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Expectations(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto H = model(n);
  const StateVector psi = random_state(n);
  for (auto _ : st) {
    auto e = H.compiled().string_expectations({psi.data(), static_cast<std::size_t>(psi.size())}, exec_of(st));
    benchmark::DoNotOptimize(e.data());
  }
}

void BM_Step(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto H = model(n);
  IntegratorPolicy pol;
  pol.exec = exec_of(st);
  StateVector psi = random_state(n);
  double t = 0.0;
  for (auto _ : st) {
    psi = propagate(H, std::move(psi), t, t + pol.max_dt, 1, pol);
    t += pol.max_dt;
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {9, 12, 15}) {
    for (int par : {0, 1}) b->Args({n, par});
  }
  b->ArgNames({"N", "parallel"});
}

}  // namespace

BENCHMARK(BM_Apply)->Apply(sizes);
BENCHMARK(BM_BoundApply)->Apply(sizes);
BENCHMARK(BM_Expectations)->Apply(sizes);
BENCHMARK(BM_Step)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
