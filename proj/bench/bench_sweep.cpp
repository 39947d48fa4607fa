#include <benchmark/benchmark.h>

#include <memory>

#include "hotspot/model_config.hpp"
#include "hotspot/simqtl.hpp"
#include "hotspot/vb/reference.hpp"
#include "hotspot/vb/state.hpp"
#include "hotspot/vb/updates.hpp"

namespace {

using namespace hotspot;

struct Fixture {
  DataSet data;
  ModelSpec spec;
  std::unique_ptr<vb::Problem> prob;
  vb::VariationalState init;

  Fixture(std::size_t p, std::size_t q) {
    sim::SimScenario sc;
    sc.n = 300;
    sc.p = p;
    sc.q = q;
    sc.chunk_size = p;
    sc.n_active_snps = 5;
    sc.n_active_resps = q / 10;
    data = prepare_dataset(sim::simulate(sc, 0).data).data;
    spec = ModelSpec::global_local(data.p(), q, calibrate_zeta_prior({2.0, 10.0}, data.p()).prior);
    prob = std::make_unique<vb::Problem>(data.X, data.Y);
    init = vb::initial_state(*prob, spec);
  }
};

const Fixture& fixture() {
  static const Fixture f(200, 400);
  return f;
}

void BM_ResponsesFast(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto st = f.init;
    benchmark::DoNotOptimize(vb::update_responses(st, *f.prob, f.spec, threads));
  }
}
BENCHMARK(BM_ResponsesFast)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_ResponsesReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto st = f.init;
    vb::reference::update_responses(st, f.data.X, f.data.Y, f.spec);
    benchmark::DoNotOptimize(st.gamma1.data());
  }
}
BENCHMARK(BM_ResponsesReference)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_FullSweep(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto st = f.init;
    benchmark::DoNotOptimize(vb::sweep(st, *f.prob, f.spec, threads));
  }
}
BENCHMARK(BM_FullSweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
