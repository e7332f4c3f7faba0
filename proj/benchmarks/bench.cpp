#include <benchmark/benchmark.h>

#include "copuf/attack.hpp"

namespace {

using namespace copuf;

PufInstance make(int which) {
  const auto a = resolve_loop_layout("Loop_A");
  switch (which) {
    case 0: return ApufInstance::create(1, 64);
    case 1: return FfApufInstance::create(1, 64, resolve_loop_layout("Loop_B"));
    case 2: return make_xor_ff(1, 64, a, 6);
    case 3: return make_oax_ff(1, 64, a, 2, 3, 1);
    case 4: return make_mn(1, 64, {32, 16, 8});
    default: return make_ipuf(1, 64, 3, 3, 33);
  }
}

const char* kNames[] = {"apuf", "ff_loop_b", "6xor_ff", "oax_231", "m64", "ipuf_3_3"};

void BM_Respond(benchmark::State& state) {
  const auto inst = make(static_cast<int>(state.range(0)));
  const auto noise = calibrated_noise(state.range(1) ? 0.05 : 0.0);
  Rng crng(2), nrng(3);
  std::vector<Challenge> cs;
  for (int i = 0; i < 1024; ++i) cs.push_back(Challenge::random(64, crng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(respond(inst, cs[i++ & 1023], noise, nrng));
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(std::string(kNames[state.range(0)]) + (state.range(1) ? " noisy" : " golden"));
}
BENCHMARK(BM_Respond)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {0, 1}});

void BM_GenerateCrps(benchmark::State& state) {
  const auto inst = make(1);
  for (auto _ : state) {
    auto set = generate_crps(inst, 20000, NoiseModel{}, 4, static_cast<unsigned>(state.range(0)));
    benchmark::DoNotOptimize(set.fingerprint());
  }
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_GenerateCrps)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const auto inst = make(1);
  const auto set = generate_crps(inst, 21000, NoiseModel{}, 5);
  const auto parts = split(set, 20000, 1000, 0);
  const auto map = FeatureMap::feed_forward(sorted_end_positions(resolve_loop_layout("Loop_B")));
  const auto train_data = make_labeled(parts.train, map);
  const auto val_data = make_labeled(parts.validation, map);
  MlpConfig cfg;
  cfg.input_dim = map.dim(64);
  cfg.hidden = three_layer_widths(static_cast<unsigned>(state.range(0)));
  cfg.epochs = 1;
  cfg.batch_size = static_cast<std::size_t>(state.range(1));
  cfg.seed = 6;
  const auto model = init_model(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(train(model, train_data, val_data, cfg).best_val_accuracy);
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_TrainEpoch)->Args({3, 20})->Args({5, 20})->Args({5, 1000})->Unit(benchmark::kMillisecond);

void BM_GradientStep(benchmark::State& state) {
  MlpConfig cfg;
  cfg.input_dim = 64;
  cfg.hidden = three_layer_widths(static_cast<unsigned>(state.range(0)));
  cfg.seed = 7;
  const auto model = init_model(cfg);
  Rng rng(8);
  const auto batch = static_cast<Eigen::Index>(state.range(1));
  Eigen::MatrixXd x(64, batch);
  Eigen::VectorXd y(batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    for (Eigen::Index i = 0; i < 64; ++i) x(i, j) = rng.bit() ? 1.0 : -1.0;
    y(j) = rng.bit();
  }
  std::vector<DenseLayer> grad;
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradient(model, x, y, grad));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_GradientStep)->Args({3, 20})->Args({4, 20})->Args({5, 1000});

}  // namespace

BENCHMARK_MAIN();
