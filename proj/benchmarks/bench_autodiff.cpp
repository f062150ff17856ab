#include <benchmark/benchmark.h>

#include "darboux/darboux.hpp"

using namespace darboux;

namespace {

const char* kSource = "exp(x1)*sin(y1*z) + x1^3*y1 - cos(z)^2/(1 + y1^2)";

void BM_Evaluate(benchmark::State& state) {
  DarbouxChart c(1);
  ScalarField f = parse_field(kSource, c);
  Eigen::VectorXd p(3);
  p << 0.3, -0.7, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(f(p));
}
BENCHMARK(BM_Evaluate);

void BM_Gradient(benchmark::State& state) {
  DarbouxChart c(1);
  ScalarField f = parse_field(kSource, c);
  Eigen::VectorXd p(3);
  p << 0.3, -0.7, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(gradient(f, p));
}
BENCHMARK(BM_Gradient);

void BM_Hessian(benchmark::State& state) {
  DarbouxChart c(1);
  ScalarField f = parse_field(kSource, c);
  Eigen::VectorXd p(3);
  p << 0.3, -0.7, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(hessian(f, p));
}
BENCHMARK(BM_Hessian);

void BM_Parse(benchmark::State& state) {
  DarbouxChart c(1);
  for (auto _ : state) benchmark::DoNotOptimize(parse_field(kSource, c));
}
BENCHMARK(BM_Parse);

}  // namespace
