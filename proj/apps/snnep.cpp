// SPDX-License-Identifier: Apache-2.0
// Command-line driver: train / predict / eval / gen-data / verify.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "snnep/config.hpp"
#include "snnep/data.hpp"
#include "snnep/predict.hpp"
#include "snnep/trainer.hpp"
#include "snnep/verify.hpp"

namespace {

using namespace snnep;

void apply_overrides(RunConfig& cfg, long long seed, int threads) {
  if (seed >= 0) {
    cfg.train.seed = static_cast<std::uint64_t>(seed);
    cfg.data.seed = static_cast<std::uint64_t>(seed);
  }
  if (threads > 0) cfg.train.threads = threads;
}

void print_metrics(const NetworkSpec& spec, const TrainRow& last) {
  std::cout << std::fixed << std::setprecision(4);
  if (spec.activation.back() == Activation::gaussian_output) {
    std::cout << "train/test MSE: " << last.train_loss << "/" << last.test_loss << "\n";
  } else {
    std::cout << "train/test accuracy: " << last.train_acc << "/" << last.test_acc << "\n";
    std::cout << "train/test loss: " << last.train_loss << "/" << last.test_loss << "\n";
  }
}

int cmd_train(const std::string& config_path, long long seed, int threads,
              const std::string& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, seed, threads);
  Batch train, test;
  load_datasets(cfg.data, train, test);
  const TrainResult res = sep_train(cfg.network, train, test, cfg.train);

  std::filesystem::create_directories(out_dir);
  save_posterior(res.posterior, out_dir + "/posterior.json");
  std::ofstream csv(out_dir + "/diagnostics.csv");
  if (!csv) throw std::runtime_error("cannot write diagnostics CSV in " + out_dir);
  csv << diagnostics_csv(res.diagnostics);

  print_metrics(cfg.network, res.diagnostics.rows.back());
  std::cout << "posterior: " << out_dir << "/posterior.json\n";
  return 0;
}

int cmd_predict(const std::string& posterior_path, const std::string& data_path,
                const std::string& out_path) {
  const Posterior post = load_posterior(posterior_path);
  const RegressionDataset ds = load_regression_csv(data_path);
  if (ds.data.inputs.cols != post.spec.layer_sizes.front())
    throw std::invalid_argument("input width does not match the posterior's network");

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  const bool regression = post.spec.activation.back() == Activation::gaussian_output;
  const int k = post.spec.layer_sizes.back();
  out << "id";
  if (regression)
    out << ",pred_mean,pred_std";
  else
    for (int i = 0; i < k; ++i) out << ",p" << i;
  out << "\n";
  out.precision(17);
  for (int r = 0; r < ds.data.inputs.rows; ++r) {
    std::vector<double> x(ds.data.inputs.row(r), ds.data.inputs.row(r) + ds.data.inputs.cols);
    const PredictiveOutput p = forward_predict(post, x, ds.data.rates_deterministic);
    out << r;
    if (regression)
      out << ',' << p.pred_mean[0] << ',' << std::sqrt(p.pred_var[0]);
    else
      for (int i = 0; i < k; ++i) out << ',' << p.spike_prob[static_cast<std::size_t>(i)];
    out << "\n";
  }
  std::cout << "predictions: " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& posterior_path, const std::string& config_path, int threads) {
  const Posterior post = load_posterior(posterior_path);
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, -1, threads);
  Batch train, test;
  load_datasets(cfg.data, train, test);
  const Batch& data = test.inputs.rows > 0 ? test : train;
  const EvalMetrics m = evaluate(post, data, true);
  std::cout << std::fixed << std::setprecision(4);
  if (post.spec.activation.back() == Activation::gaussian_output)
    std::cout << "MSE: " << m.loss << " (" << m.n << " samples)\n";
  else
    std::cout << "accuracy: " << m.accuracy << " loss: " << m.loss << " (" << m.n
              << " samples)\n";
  return 0;
}

int cmd_gen_data(const std::string& variant, int n, long long seed, const std::string& out_path,
                 int grid_points) {
  const RegressionVariant v = variant_from_name(variant);
  const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : 1;
  save_regression_csv(gen_regression(v, n, s), out_path);
  std::cout << "dataset: " << out_path << "\n";
  if (grid_points > 0) {
    const std::string gp = out_path + ".grid.csv";
    save_regression_csv(regression_grid(v, grid_points), gp);
    std::cout << "grid: " << gp << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EP training for feedforward spiking networks"};
  app.require_subcommand(1);

  std::string config_path, out_path, posterior_path, data_path, suite = "all", variant = "D1";
  long long seed = -1;
  int threads = 0, n = 600, grid_points = 0;

  CLI::App* train = app.add_subcommand("train", "train a network from a JSON config");
  train->add_option("--config", config_path, "run configuration JSON")->required();
  train->add_option("--seed", seed, "override config seeds");
  train->add_option("--threads", threads, "worker thread count");
  train->add_option("--out", out_path, "output directory")->default_val("out");

  CLI::App* predict = app.add_subcommand("predict", "predict a dataset CSV with a posterior");
  predict->add_option("--posterior", posterior_path, "posterior JSON")->required();
  predict->add_option("--data", data_path, "dataset CSV")->required();
  predict->add_option("--seed", seed, "accepted for interface uniformity");
  predict->add_option("--threads", threads, "worker thread count");
  predict->add_option("--out", out_path, "output CSV path")->default_val("predictions.csv");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a posterior on a config's test data");
  eval->add_option("--posterior", posterior_path, "posterior JSON")->required();
  eval->add_option("--config", config_path, "run configuration JSON")->required();
  eval->add_option("--seed", seed, "accepted for interface uniformity");
  eval->add_option("--threads", threads, "worker thread count");

  CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic regression dataset");
  gen->add_option("--variant", variant, "D1, D2 or D3")->default_val("D1");
  gen->add_option("--n", n, "sample count")->default_val(600);
  gen->add_option("--seed", seed, "generation seed");
  gen->add_option("--grid", grid_points, "also write a noise-free evaluation grid");
  gen->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* verify = app.add_subcommand("verify", "run oracle self-check suites");
  verify->add_option("--suite", suite, "suite name or 'all'")->default_val("all");
  verify->add_option("--seed", seed, "randomized-case seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, seed, threads, out_path);
    if (predict->parsed()) return cmd_predict(posterior_path, data_path, out_path);
    if (eval->parsed()) return cmd_eval(posterior_path, config_path, threads);
    if (gen->parsed()) return cmd_gen_data(variant, n, seed, out_path, grid_points);
    if (verify->parsed()) {
      const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : 7;
      return run_verify(suite, s, std::cout) == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
