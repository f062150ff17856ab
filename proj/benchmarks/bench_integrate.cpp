#include <benchmark/benchmark.h>

#include "darboux/darboux.hpp"

using namespace darboux;

namespace {

ContactSystem oscillator() {
  DarbouxChart c(1);
  return {c, parse_field("(x1^2 + y1^2)/2 + 0.1*z", c)};
}

void BM_Rk4Oscillator(benchmark::State& state) {
  ContactSystem s = oscillator();
  IntegratorSpec spec;
  spec.t1 = 10.0;
  spec.step = 1e-3;
  Point x0(3);
  x0 << 1, 0, 0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, x0, spec));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Rk4Oscillator)->Unit(benchmark::kMillisecond);

void BM_Rkf45Pendulum(benchmark::State& state) {
  DarbouxChart c(static_cast<int>(state.range(0)));
  std::string h = "0.05*z";
  for (int i = 1; i <= c.n(); ++i) h += " + y" + std::to_string(i) + "^2/2 - cos(x" + std::to_string(i) + ")";
  ContactSystem s(c, parse_field(h, c));
  IntegratorSpec spec;
  spec.method = Method::Rkf45;
  spec.t1 = 10.0;
  spec.step = 1e-2;
  Point x0 = Point::Constant(c.dim(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, x0, spec));
}
BENCHMARK(BM_Rkf45Pendulum)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
