// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "dense.hpp"
#include "lattice.hpp"
#include "pauli.hpp"

namespace nlqs {

// Every check is expressed as measured <= bound; pass tolerates -1e-9 slack.
// For lower-bound statements `measured` carries the required minimum and
// `bound` the achieved quantity (lhs/rhs are recorded in params).
// `applicable` marks whether the bound is actually claimed for these
// parameters; non-applicable reports are observations, not assertions.
struct BoundReport {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
  bool applicable = true;
  std::vector<std::pair<std::string, std::string>> params;

  void finish();  // fills slack and pass from measured/bound
  void add_param(const std::string& key, const std::string& value);
  void add_param(const std::string& key, double value);
  void add_param(const std::string& key, long value);
  void add_param(const std::string& key, std::span<const int> values);
};

constexpr double kSlackTol = 1e-9;

// S(A|~A) after depolarizing A with strength p is at least
// (1-p) S(A|~A) + p|A|.
BoundReport check_entropy_production(const State& state, std::span<const int> a,
                                     double p);

// D(rho || sigma_A x rho_~A) <= D(rho || sigma_B x rho_~B) for A subseteq B.
BoundReport check_subset_monotonicity(const State& state,
                                      std::span<const int> a,
                                      std::span<const int> b);

// D(rho || sigma_A x rho_~A) <= (1-p)^d |L(A)|.
BoundReport check_decay_bound(const Circuit& circuit, std::span<const int> a);
BoundReport check_decay_bound(const Circuit& circuit, const State& state,
                              std::span<const int> a);

// Per block: D(rho || sigma_J_i x rho_rest) <= (1-p)^d (4d)^D. The (4d)^D
// cap on the block lightcone is valid whenever width <= 2d; for wider blocks
// the exact lightcone size replaces it.
std::vector<BoundReport> check_sublattice_decay(const Circuit& circuit,
                                                const SublatticeGrid& grid);
std::vector<BoundReport> check_sublattice_decay(const Circuit& circuit,
                                                const State& state,
                                                const SublatticeGrid& grid);

// ||M_A(rho)||_1 <= min(2^|A|, (2 [(1-p)^d (4d)^D]^{1/(2*3^D)})^|A|), the
// second branch only when the bracket is < 1. The bracket branch is proven
// at width 2d exactly; elsewhere the report is an observation.
BoundReport check_ie_norm_bound(const Circuit& circuit,
                                const SublatticeGrid& grid,
                                std::span<const int> a);
BoundReport check_ie_norm_bound(const Circuit& circuit, const State& state,
                                const SublatticeGrid& grid,
                                std::span<const int> a);

enum class TruncationScheme { Sparse, Percolated };

// ||rho - rho_trunc||_1 against n^-k (sparse) or n e^-ell (percolated),
// asserted only above the Fact-4.1 critical depth with c = 1.
BoundReport truncation_error(const Circuit& circuit, const SublatticeGrid& grid,
                             TruncationScheme scheme, int parameter);
// All k and ell in [0, m] in one pass over a precomputed decomposition.
std::vector<BoundReport> truncation_error_sweep(const Circuit& circuit,
                                                const State& state,
                                                const SublatticeGrid& grid);

// || P_ABC - P_AB P_{C|B} ||_1 with A a block, B its ell-boundary and C the
// rest, on the dephased output distribution. Pure measurement.
double markov_gap(const State& state, const SublatticeGrid& grid, int block,
                  int ell);
double markov_gap(const Circuit& circuit, const SublatticeGrid& grid, int block,
                  int ell);

// TV(patching law, P) <= sum of per-step Markov gaps (the telescoping bound).
BoundReport check_markov_chain_accumulation(const Circuit& circuit,
                                            const SublatticeGrid& grid,
                                            int ell);
BoundReport check_markov_chain_accumulation(const Circuit& circuit,
                                            const State& state,
                                            const SublatticeGrid& grid,
                                            int ell);

struct Observable {
  enum class Kind { Pauli, Projector };
  Kind kind = Kind::Pauli;
  PauliString pauli{1, 0};
  std::vector<int> subset;  // projector qubits, ascending
  std::uint64_t bits = 0;   // projector bitstring, big-endian over subset

  static Observable make_pauli(PauliString p);
  static Observable make_projector(std::vector<int> subset,
                                   std::uint64_t bits);
  std::vector<int> support() const;
  std::string describe() const;
};

// |Tr(rho O)| <= (1-p)^|A| for Pauli O, (1-p/2)^|A| for bitstring projectors,
// with |A| the qubit support; needs depth >= 1.
BoundReport check_observable_decay(const Circuit& circuit,
                                   const Observable& observable);
BoundReport check_observable_decay(const Circuit& circuit, const State& state,
                                   const Observable& observable);

double observable_expectation(const State& state,
                              const Observable& observable);

enum class EstimateMethod { Lightcone, Trajectory };

struct Estimate {
  double value = 0.0;
  double stderr_value = 0.0;
  long budget = 0;
};

Estimate estimate_observable(const Circuit& circuit,
                             const Observable& observable,
                             EstimateMethod method, long budget,
                             std::uint64_t seed);

}  // namespace nlqs
