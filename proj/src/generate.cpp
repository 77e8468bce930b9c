#include "betadelta/generate.hpp"

#include <cmath>

#include "betadelta/linalg.hpp"
#include "betadelta/rng.hpp"

namespace betadelta {

DenseMatrix generate_gaussian_matrix(std::size_t m, std::size_t n, double sigma,
                                     std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_gaussian_matrix: empty shape");
  if (sigma < 0.0) throw std::invalid_argument("generate_gaussian_matrix: sigma < 0");
  Rng rng(seed);
  DenseMatrix A(m, n);
  for (double& v : A.data) v = rng.normal(sigma);
  return A;
}

Vec generate_spike_signal(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("generate_spike_signal: k > n");
  Rng rng(seed);
  // partial Fisher-Yates: the first k slots end up a uniform k-subset
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    x[idx[i]] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return x;
}

SensingProblem generate_problem(std::size_t n, std::size_t m, std::size_t k,
                                double sigma, double sigma_w, std::uint64_t seed) {
  if (!(k <= m && m <= n)) throw std::invalid_argument("generate_problem: need k <= m <= n");
  if (sigma_w < 0.0) throw std::invalid_argument("generate_problem: sigma_w < 0");

  SensingProblem p;
  p.sigma = sigma;
  p.sigma_w = sigma_w;
  p.seed = seed;
  p.x_true = generate_spike_signal(n, k, derive_seed(seed, 0));
  p.A = generate_gaussian_matrix(m, n, sigma, derive_seed(seed, 1));
  p.b = matvec(p.A, p.x_true);
  if (sigma_w > 0.0) {
    Rng noise(derive_seed(seed, 2));
    for (double& bi : p.b) bi += noise.normal(sigma_w);
  }
  p.delta = std::sqrt(static_cast<double>(m)) * sigma_w;
  return p;
}

}  // namespace betadelta
