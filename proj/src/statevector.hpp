// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "circuit.hpp"
#include "rng.hpp"

namespace nlqs {

// Pure-state register used by the trajectory sampler and the noiseless
// cross-checks. Same big-endian bit convention as the dense backend.
class Statevector {
public:
  explicit Statevector(int num_qubits);

  int qubit_count() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  void apply_unitary(const Eigen::MatrixXcd& u, std::span<const int> positions);
  void apply_gate(const Gate& gate);
  // code: 1 = X, 2 = Y, 3 = Z.
  void apply_pauli(int position, int code);

  Eigen::VectorXd probabilities() const;
  std::uint64_t sample_measurement(Rng& rng) const;

  // <psi| P |psi> for a Pauli word over the full register (codes 0..3 per
  // position, big-endian order).
  double pauli_expectation(std::span<const int> codes) const;
  // Probability that `positions` read `bits` (big-endian over positions).
  double projector_expectation(std::span<const int> positions,
                               std::uint64_t bits) const;

private:
  int n_;
  Eigen::VectorXcd amps_;
};

}  // namespace nlqs
