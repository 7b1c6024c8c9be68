// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace nlqs {

class Circuit;

// Hypercubic qubit layout. Qubit indices are row-major over the coordinate
// tuple (last axis fastest), and every map below is a bijection.
class Lattice {
public:
  explicit Lattice(std::vector<int> dims);

  int dimension() const { return static_cast<int>(dims_.size()); }
  int qubit_count() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }

  std::vector<int> coords(int qubit) const;
  int index(std::span<const int> coords) const;

  // Nearest neighbours: coordinates differ by one along exactly one axis.
  bool adjacent(int a, int b) const;
  std::vector<int> neighbors(int qubit) const;

private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int n_ = 0;
};

// Coarse-graining of a lattice into axis-aligned blocks of side `width`.
// Blocks at the far boundary of a non-divisible axis are smaller, never
// merged. Block order is row-major over block coordinates, and block
// adjacency is the Moore neighbourhood (all coordinate offsets in {-1,0,1}),
// so a block has at most 3^D - 1 neighbours.
class SublatticeGrid {
public:
  SublatticeGrid(const Lattice& lattice, int width);

  const Lattice& lattice() const { return lattice_; }
  int width() const { return width_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int b) const;
  int block_of(int qubit) const;

  bool blocks_adjacent(int a, int b) const;
  const std::vector<int>& block_neighbors(int b) const;

  // All blocks within graph distance `ell` of `blocks`, excluding them.
  std::vector<int> boundary(std::span<const int> blocks, int ell) const;

  // Union of the qubits of the listed blocks, sorted.
  std::vector<int> qubits_of(std::span<const int> blocks) const;

private:
  Lattice lattice_;
  int width_ = 0;
  std::vector<int> block_dims_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_qubit_;
  std::vector<std::vector<int>> neighbors_;
};

// Reverse lightcone of a region through a circuit, layer by layer.
// levels[i] holds L_i(A): levels[d] = A and levels[0] = L(A), each sorted.
struct LightconeTrace {
  std::vector<std::vector<int>> levels;

  const std::vector<int>& cone() const { return levels.front(); }
};

LightconeTrace reverse_lightcone(const Circuit& circuit,
                                 std::span<const int> region);

// Partition of `subset` (block indices) into maximal adjacency-connected
// groups. Groups and their members are sorted.
std::vector<std::vector<int>> connected_components(const SublatticeGrid& grid,
                                                   std::span<const int> subset);

// Smallest depth from which (1-p)^d (4d)^D stays below 1/c. The function is
// unimodal in d, so this is one past the last violating depth (or 1 when no
// depth violates).
int critical_depth(double p, int dimension, double c);

}  // namespace nlqs
