#pragma once

#include <cstdint>

#include "betadelta/types.hpp"

namespace betadelta {

/// m x n matrix of i.i.d. normal(0, sigma^2) entries. Same seed, same matrix.
DenseMatrix generate_gaussian_matrix(std::size_t m, std::size_t n, double sigma,
                                     std::uint64_t seed);

/// Length-n vector with exactly k entries of +/-1 at positions drawn without
/// replacement, signs fair coin flips. Rejects k > n.
Vec generate_spike_signal(std::size_t n, std::size_t k, std::uint64_t seed);

/// Full instance: b = A x_true + w with w ~ normal(0, sigma_w^2) i.i.d., and
/// delta = sqrt(m) * sigma_w. Signal, matrix and noise use sub-seeds derived
/// from `seed` (streams 0, 1, 2).
SensingProblem generate_problem(std::size_t n, std::size_t m, std::size_t k,
                                double sigma, double sigma_w, std::uint64_t seed);

}  // namespace betadelta
