// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace nlqs {

struct Gate {
  std::vector<int> targets;     // one or two qubits
  std::string name;             // empty for explicit matrices
  std::vector<double> params;
  Eigen::MatrixXcd matrix;      // 2x2 or 4x4, always materialized
  bool explicit_matrix = false;
};

// Matrix for a named gate (H, X, Y, Z, S, T, CZ, CNOT, SWAP, RZ, RY).
// Two-qubit matrices act on the basis |t0 t1> with the first target as the
// high bit; CNOT controls on the first target.
Eigen::MatrixXcd named_gate_matrix(const std::string& name,
                                   std::span<const double> params);

struct LocalityViolation {
  int layer = 0;
  std::vector<int> targets;
};

// How a circuit came to be; random generation records its seed and generator
// so outputs can carry full provenance.
struct CircuitOrigin {
  bool random = false;
  std::uint64_t seed = 0;
  std::string generator;
  std::string gateset;
};

// Layered circuit with single-qubit depolarizing noise of strength p applied
// on every qubit after each layer, acting on the all-zero input state.
class Circuit {
public:
  enum class Validate { Full, SkipLocality };

  Circuit(Lattice lattice, std::vector<std::vector<Gate>> layers, double p,
          Validate validate = Validate::Full);

  const Lattice& lattice() const { return lattice_; }
  int qubit_count() const { return lattice_.qubit_count(); }
  int depth() const { return static_cast<int>(layers_.size()); }
  double noise() const { return p_; }
  const std::vector<std::vector<Gate>>& layers() const { return layers_; }

  const CircuitOrigin& origin() const { return origin_; }
  void set_origin(CircuitOrigin origin) { origin_ = std::move(origin); }

  // FNV-1a of the canonical serialization, as 16 hex digits.
  std::string hash() const;

private:
  Lattice lattice_;
  std::vector<std::vector<Gate>> layers_;
  double p_ = 0.0;
  CircuitOrigin origin_;
};

std::vector<LocalityViolation> validate_geometric_locality(
    const Circuit& circuit, const Lattice& lattice);

Circuit parse_circuit(const std::string& text);
Circuit load_circuit(const std::string& path);
std::string serialize_circuit(const Circuit& circuit);

enum class GateSet { Haar, Named };

// Brickwork circuit: layer l pairs neighbours along axis (l mod 2D)/2 with
// parity (l mod 2D) mod 2. Haar mode draws each two-qubit unitary by
// QR-orthonormalizing a seeded complex Gaussian matrix.
Circuit random_local_circuit(const Lattice& lattice, int depth, double p,
                             std::uint64_t seed,
                             GateSet gateset = GateSet::Haar);

}  // namespace nlqs
