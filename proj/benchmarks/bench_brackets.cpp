#include <benchmark/benchmark.h>

#include "darboux/darboux.hpp"

using namespace darboux;

namespace {

struct Fixture {
  DarbouxChart chart;
  JacobiStructure structure;
  ScalarField f, g, h;
  Eigen::VectorXd p;
  explicit Fixture(int n)
      : chart(n),
        structure(JacobiStructure::contact(chart)),
        f(parse_field("x1^2*y1 + sin(z)", chart)),
        g(parse_field("exp(x1)*y1 - z^2", chart)),
        h(parse_field("x1*z + y1^3", chart)),
        p(Eigen::VectorXd::LinSpaced(chart.dim(), -0.5, 0.7)) {}
};

void BM_Bracket(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_bracket(fx.structure, fx.f, fx.g, fx.p));
}
BENCHMARK(BM_Bracket)->Arg(1)->Arg(2)->Arg(4);

void BM_JacobiIdentity(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_identity_residual(fx.structure, fx.f, fx.g, fx.h, fx.p));
}
BENCHMARK(BM_JacobiIdentity)->Arg(1)->Arg(2);

void BM_HamiltonianCommutator(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  VectorFieldExpr xf = hamiltonian_field(ContactSystem(fx.chart, fx.f));
  VectorFieldExpr xg = hamiltonian_field(ContactSystem(fx.chart, fx.g));
  for (auto _ : state) benchmark::DoNotOptimize(lie_bracket(xf, xg, fx.p));
}
BENCHMARK(BM_HamiltonianCommutator)->Arg(1)->Arg(2);

}  // namespace
