// SPDX-License-Identifier: Apache-2.0
// Times one training sweep with the serial reference kernels against the
// OpenMP kernels and checks that the resulting factor states are bitwise
// identical.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include "snnep/engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace snnep;

namespace {

Batch make_batch(int m, int d, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Batch b;
  b.inputs = Grid<double>(m, d);
  b.targets = Grid<double>(m, k, 0.0);
  for (auto& x : b.inputs.v) x = u(rng) < 0.3 ? 1.0 : 0.0;
  std::uniform_int_distribution<int> cls(0, k - 1);
  for (int r = 0; r < m; ++r) b.targets.at(r, cls(rng)) = 1.0;
  return b;
}

std::vector<LayerFactorState> run(const NetworkSpec& spec, const Batch& batch, bool parallel,
                                  int sweeps, double& seconds) {
  EngineConfig cfg;
  cfg.gamma_aep = 0.05;
  cfg.aep_max_iters = 3;
  cfg.parallel = parallel;
  std::vector<LayerFactorState> st = init_state(spec, batch.inputs.rows);
  SweepDiag diag;
  const auto t0 = std::chrono::steady_clock::now();
  for (int s = 0; s < sweeps; ++s) {
    forward_pass(spec, st, batch, cfg, diag);
    backward_pass(spec, st, batch, cfg, diag);
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

long long compare(const std::vector<LayerFactorState>& a, const std::vector<LayerFactorState>& b) {
  long long diff = 0;
  auto neq = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) != 0; };
  for (std::size_t l = 0; l < a.size(); ++l) {
    for (std::size_t k = 0; k < a[l].q1_Wg.size(); ++k) {
      if (neq(a[l].q1_Wg.v[k].lam, b[l].q1_Wg.v[k].lam)) ++diff;
      if (neq(a[l].q1_Wg.v[k].h, b[l].q1_Wg.v[k].h)) ++diff;
    }
    for (std::size_t k = 0; k < a[l].q1_U.size(); ++k) {
      if (neq(a[l].q1_U.v[k].lam, b[l].q1_U.v[k].lam)) ++diff;
      if (neq(a[l].q0_U.v[k].lam, b[l].q0_U.v[k].lam)) ++diff;
    }
    for (std::size_t k = 0; k < a[l].q1_V.size(); ++k)
      if (neq(a[l].q1_V.v[k].log_odds(), b[l].q1_V.v[k].log_odds())) ++diff;
  }
  return diff;
}

}  // namespace

int main(int argc, char** argv) {
  const int m = argc > 1 ? std::atoi(argv[1]) : 256;
  const int sweeps = argc > 2 ? std::atoi(argv[2]) : 3;

  NetworkSpec spec;
  spec.layer_sizes = {784, 120, 10};
  spec.activation = {Activation::heaviside, Activation::heaviside};
  spec.weight_domain = {WeightDomain::continuous, WeightDomain::continuous};
  spec.prior = {PriorSpec{}, PriorSpec{}};

  std::mt19937_64 rng(1);
  const Batch batch = make_batch(m, 784, 10, rng);

  double t_serial = 0.0, t_par = 0.0;
  const auto st_serial = run(spec, batch, false, sweeps, t_serial);
  const auto st_par = run(spec, batch, true, sweeps, t_par);
  const long long diff = compare(st_serial, st_par);

  int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
  {
#pragma omp single
    threads = omp_get_num_threads();
  }
#endif
  std::printf("batch=%d sweeps=%d\n", m, sweeps);
  std::printf("serial   : %.3f s\n", t_serial);
  std::printf("openmp(%d): %.3f s  speedup %.2fx\n", threads, t_par, t_serial / t_par);
  std::printf("bitwise identical: %s (%lld differing values)\n", diff == 0 ? "yes" : "NO", diff);
  return diff == 0 ? 0 : 1;
}
