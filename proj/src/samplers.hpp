// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "dense.hpp"
#include "lattice.hpp"

namespace nlqs {

struct SampleBatch {
  int n = 0;
  std::vector<std::string> bitstrings;
  std::string method;
  std::uint64_t seed = 0;
  std::string generator;
  // Diagnostics. clamped_mass totals the negative quasi-probability removed
  // across conditional steps; fallback_events counts patching steps that hit
  // a zero-probability boundary and fell back to the unconditional marginal.
  double clamped_mass = 0.0;
  long clamp_events = 0;
  long fallback_events = 0;
};

std::string bits_to_string(std::uint64_t bits, int n);

SampleBatch sample_uniform(int n, std::uint64_t seed, long count);

// Bit-by-bit sampling-to-computing reduction on the dephased output state.
SampleBatch sample_exact(const Circuit& circuit, std::uint64_t seed,
                         long count);

// Monte-Carlo unravelling: per noise site draw I with probability 1-3p/4 and
// X, Y, Z with probability p/4 each, evolve a pure state, measure.
SampleBatch sample_trajectory(const Circuit& circuit, std::uint64_t seed,
                              long count);

// Quasi-probability of reading `bits` on `subset` under rho_{sparse,k},
// evaluated by enumerating every inclusion-exclusion term with |A| <= k and
// lightcone-simulating its surviving marginal. May be negative.
double sparse_marginal(const Circuit& circuit, const SublatticeGrid& grid,
                       int k, std::span<const int> subset, std::uint64_t bits);

SampleBatch sample_sparse(const Circuit& circuit, const SublatticeGrid& grid,
                          int k, std::uint64_t seed, long count);

// Block-by-block sampler conditioning each block on the already-sampled
// blocks within graph distance ell.
SampleBatch sample_patching(const Circuit& circuit, const SublatticeGrid& grid,
                            int ell, std::uint64_t seed, long count);

// Clamp negative entries to zero and renormalize; errors when no positive
// mass remains. Clamped mass is reported through the optional out-parameter.
Distribution sanitize(const QuasiDistribution& quasi,
                      double* clamped_mass = nullptr);

// Exact sampling laws (marginalized over the random tape), as distributions
// over all 2^n outcomes in big-endian order.
Eigen::VectorXd law_exact(const Circuit& circuit);
Eigen::VectorXd law_sparse(const Circuit& circuit, const SublatticeGrid& grid,
                           int k, double* clamped_mass = nullptr);
Eigen::VectorXd law_patching(const Circuit& circuit, const SublatticeGrid& grid,
                             int ell, long* fallback_events = nullptr);
// Brute-force enumeration over all noise tapes; needs depth * n <= 12 sites.
Eigen::VectorXd law_trajectory(const Circuit& circuit);

}  // namespace nlqs
