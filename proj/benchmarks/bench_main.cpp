#include "fracvisc/integrator.hpp"
#include "fracvisc/kernel.hpp"
#include "fracvisc/laplace_oracle.hpp"
#include "fracvisc/special_functions.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace fracvisc;

namespace
{

// range(0): alpha in hundredths, range(1): x
void BM_MittagLeffler(benchmark::State &state)
{
   const double alpha = static_cast<double>(state.range(0)) / 100.0;
   const double x = static_cast<double>(state.range(1));
   for (auto _ : state) { benchmark::DoNotOptimize(ml(alpha, -x)); }
}
BENCHMARK(BM_MittagLeffler)->ArgsProduct({{30, 50, 90}, {1, 5, 20, 100}});

void BM_MittagLefflerDeriv(benchmark::State &state)
{
   const double x = static_cast<double>(state.range(0));
   for (auto _ : state) { benchmark::DoNotOptimize(ml_deriv(0.5, -x)); }
}
BENCHMARK(BM_MittagLefflerDeriv)->Arg(1)->Arg(20);

void BM_Weights(benchmark::State &state)
{
   const auto kind = static_cast<ConvolutionKind>(state.range(0));
   const auto n = static_cast<std::size_t>(state.range(1));
   const KernelParams k(0.5, 1.0, 0.5);
   for (auto _ : state) { benchmark::DoNotOptimize(make_rule(k, 1e-3, n, kind)); }
   state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Weights)
   ->ArgsProduct({{static_cast<long>(ConvolutionKind::product_integration), static_cast<long>(ConvolutionKind::cq_bdf2)},
                  {1000, 8000}})
   ->Unit(benchmark::kMillisecond);

ModalSystem oscillator(double alpha)
{
   Eigen::VectorXd L(1), d0(1), v0(1);
   L << 1.0;
   d0 << 1.0;
   v0 << 0.0;
   return assemble_general(1.0, L, {Eigen::MatrixXd::Identity(1, 1)}, {KernelParams(0.4, 1.0, alpha)},
                           LoadSignal::zero(1), d0, v0);
}

void BM_Solve(benchmark::State &state)
{
   const ModalSystem sys = oscillator(0.5);
   IntegratorConfig cfg;
   cfg.dt = 1e-3;
   cfg.T = static_cast<double>(state.range(0));
   for (auto _ : state) { benchmark::DoNotOptimize(solve(sys, cfg)); }
}
BENCHMARK(BM_Solve)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TalbotInvert(benchmark::State &state)
{
   const ModalSystem sys = oscillator(0.5);
   const int M = static_cast<int>(state.range(0));
   for (auto _ : state) { benchmark::DoNotOptimize(invert(sys, 2.0, {M})); }
}
BENCHMARK(BM_TalbotInvert)->Arg(32)->Arg(64);

} // namespace
BENCHMARK_MAIN();
