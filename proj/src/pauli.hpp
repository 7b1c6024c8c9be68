// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dense.hpp"
#include "lattice.hpp"

namespace nlqs {

// Word over {I,X,Y,Z}, packed two bits per qubit with qubit 0 in the highest
// field, so integer order of words equals lexicographic order of strings.
class PauliString {
public:
  static constexpr int kMaxQubits = 31;

  PauliString(int num_qubits, std::uint64_t word);
  static PauliString identity(int num_qubits);
  static PauliString from_string(std::string_view text);

  int size() const { return n_; }
  std::uint64_t word() const { return word_; }
  int code(int position) const;  // 0=I 1=X 2=Y 3=Z
  PauliString with(int position, int code) const;

  int weight() const;
  std::vector<int> support_positions() const;
  std::string str() const;

  bool operator==(const PauliString& other) const = default;

private:
  int n_;
  std::uint64_t word_;
};

// Sparse map word -> Tr(rho P), real for Hermitian input.
class PauliDecomposition {
public:
  PauliDecomposition(std::vector<int> qubits,
                     std::map<std::uint64_t, double> coefficients);

  const std::vector<int>& qubits() const { return qubits_; }
  int qubit_count() const { return static_cast<int>(qubits_.size()); }
  const std::map<std::uint64_t, double>& coefficients() const {
    return coefficients_;
  }
  double coefficient(const PauliString& p) const;

private:
  std::vector<int> qubits_;
  std::map<std::uint64_t, double> coefficients_;
};

PauliDecomposition pauli_decompose(const HermitianOperator& op);
HermitianOperator pauli_reconstruct(const PauliDecomposition& dec);

// mat += weight * P (matrix of the Pauli word over the register of mat).
void add_pauli_to_matrix(Eigen::MatrixXcd& mat, const PauliString& p,
                         double weight);

// Blocks on which P acts non-trivially; P must cover the full lattice.
std::vector<int> support(const PauliString& p, const SublatticeGrid& grid);

// M_A (x) D_{J\A} on a Pauli operator: P itself when Supp(P) = A, else zero.
std::optional<PauliString> apply_inclusion_exclusion(
    const PauliString& p, std::span<const int> blocks,
    const SublatticeGrid& grid);

// Complete depolarization of the listed blocks.
HermitianOperator depolarize_blocks(const HermitianOperator& op,
                                    const SublatticeGrid& grid,
                                    std::span<const int> blocks);

// M_A(rho) = sum_{B subseteq A} (-1)^|B| D_B(rho).
HermitianOperator inclusion_exclusion_m(const HermitianOperator& op,
                                        const SublatticeGrid& grid,
                                        std::span<const int> blocks);

// M_A(rho_A) (x) sigma_{J\A} = [M_A (x) D_{J\A}](rho) on the full register.
HermitianOperator inclusion_exclusion_term(const HermitianOperator& op,
                                           const SublatticeGrid& grid,
                                           std::span<const int> blocks);

// Sum of inclusion_exclusion_term over every A subseteq J; equals the input.
HermitianOperator inclusion_exclusion_reconstruct(const HermitianOperator& op,
                                                  const SublatticeGrid& grid);

PauliDecomposition truncate_sparse(const PauliDecomposition& dec,
                                   const SublatticeGrid& grid, int k);
PauliDecomposition truncate_percolated(const PauliDecomposition& dec,
                                       const SublatticeGrid& grid, int ell);

// For each P: number of supporting blocks and largest adjacency-connected
// component of the support.
struct SupportProfile {
  int block_count = 0;
  int max_component = 0;
};
SupportProfile support_profile(const PauliString& p, const SublatticeGrid& grid);

// Lines "paulistring coefficient" for nonzero entries, lexicographic order.
std::string dump_decomposition(const PauliDecomposition& dec);

}  // namespace nlqs
