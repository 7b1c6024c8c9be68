// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "circuit.hpp"

namespace nlqs {

// Bit convention used throughout: an operator on qubits (q_0 < q_1 < ... <
// q_{k-1}) indexes its 2^k basis states big-endian in qubit-list order, so
// position j carries the bit mask 1 << (k-1-j) and basis index b equals the
// bitstring b_0 b_1 ... b_{k-1} read as a binary number.

class HermitianOperator {
public:
  HermitianOperator(std::vector<int> qubits, Eigen::MatrixXcd mat);

  const std::vector<int>& qubits() const { return qubits_; }
  int qubit_count() const { return static_cast<int>(qubits_.size()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  double trace() const { return trace_; }

  // Position of a global qubit id inside this operator's register.
  int position_of(int qubit) const;

protected:
  std::vector<int> qubits_;
  Eigen::MatrixXcd mat_;
  double trace_ = 0.0;
};

// Density matrix: Hermitian, unit trace. Positivity drift is handled where
// eigenvalues are consumed (clipped to [0,1] within 1e-9, error beyond).
class State : public HermitianOperator {
public:
  State(std::vector<int> qubits, Eigen::MatrixXcd mat);

private:
  friend State reduced_state(const State&, std::span<const int>);
  friend State simulate(const Circuit&);
  friend State simulate_lightcone(const Circuit&, std::span<const int>);
  struct Trusted {};
  State(Trusted, std::vector<int> qubits, Eigen::MatrixXcd mat);
};

struct QuasiDistribution {
  std::vector<int> qubits;
  Eigen::VectorXd values;
};

class Distribution {
public:
  Distribution(std::vector<int> qubits, Eigen::VectorXd probs);

  const std::vector<int>& qubits() const { return qubits_; }
  const Eigen::VectorXd& probs() const { return probs_; }

private:
  std::vector<int> qubits_;
  Eigen::VectorXd probs_;
};

// In-place register kernels shared by the dense, pauli and sampler code.
void apply_unitary_inplace(Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u,
                           std::span<const int> positions, int num_qubits);
void apply_depolarizing_inplace(Eigen::MatrixXcd& rho, int position,
                                int num_qubits, double strength);

// rho = Phi(|0><0|^n): layers in order, each followed by depolarizing noise
// of strength p on every qubit.
State simulate(const Circuit& circuit);

// Marginal of simulate() on `region`, computed on the reverse lightcone of
// `region` only; requires |L(region)| within the dense guard.
State simulate_lightcone(const Circuit& circuit, std::span<const int> region);

HermitianOperator partial_trace(const HermitianOperator& op,
                                std::span<const int> keep);
State reduced_state(const State& state, std::span<const int> keep);

HermitianOperator dephase(const HermitianOperator& op,
                          std::span<const int> qubits);
State dephase(const State& state, std::span<const int> qubits);

// Computational-basis distribution of the full register (the dephased
// diagonal).
Eigen::VectorXd diagonal_distribution(const State& state);

Distribution marginal_distribution(const State& state,
                                   std::span<const int> subset);
Distribution conditional_distribution(const State& state,
                                      std::span<const int> target,
                                      std::span<const int> given,
                                      std::uint64_t given_bits);

// Entropies are in bits (base-2 logarithms, 0 log 0 := 0).
double von_neumann_entropy(const State& state);
// S(A | complement) = S(rho) - S(rho_{complement}).
double conditional_entropy(const State& state, std::span<const int> a);
// D(rho || sigma_A x rho_{complement}) = |A| - S(A | complement).
double relative_entropy_to_depolarized(const State& state,
                                       std::span<const int> a);

double trace_norm(const HermitianOperator& op);
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace nlqs
