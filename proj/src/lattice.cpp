// SPDX-License-Identifier: Apache-2.0
#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>

#include "circuit.hpp"
#include "common.hpp"

namespace nlqs {

Lattice::Lattice(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "lattice needs at least one axis");
  }
  n_ = 1;
  for (int side : dims_) {
    if (side < 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "lattice side lengths must be positive");
    }
    n_ *= side;
  }
  strides_.assign(dims_.size(), 1);
  for (int axis = static_cast<int>(dims_.size()) - 2; axis >= 0; --axis) {
    strides_[axis] = strides_[axis + 1] * dims_[axis + 1];
  }
}

std::vector<int> Lattice::coords(int qubit) const {
  if (qubit < 0 || qubit >= n_) {
    throw Error(ErrorKind::InvalidArgument, "qubit index out of range");
  }
  std::vector<int> c(dims_.size());
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    c[axis] = qubit / strides_[axis];
    qubit %= strides_[axis];
  }
  return c;
}

int Lattice::index(std::span<const int> coords) const {
  if (coords.size() != dims_.size()) {
    throw Error(ErrorKind::InvalidArgument, "coordinate arity mismatch");
  }
  int idx = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (coords[axis] < 0 || coords[axis] >= dims_[axis]) {
      throw Error(ErrorKind::InvalidArgument, "coordinate out of range");
    }
    idx += coords[axis] * strides_[axis];
  }
  return idx;
}

bool Lattice::adjacent(int a, int b) const {
  const auto ca = coords(a);
  const auto cb = coords(b);
  int total = 0;
  for (std::size_t axis = 0; axis < ca.size(); ++axis) {
    total += std::abs(ca[axis] - cb[axis]);
  }
  return total == 1;
}

std::vector<int> Lattice::neighbors(int qubit) const {
  const auto c = coords(qubit);
  std::vector<int> out;
  for (std::size_t axis = 0; axis < c.size(); ++axis) {
    for (int step : {-1, 1}) {
      const int moved = c[axis] + step;
      if (moved < 0 || moved >= dims_[axis]) {
        continue;
      }
      auto shifted = c;
      shifted[axis] = moved;
      out.push_back(index(shifted));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SublatticeGrid::SublatticeGrid(const Lattice& lattice, int width)
    : lattice_(lattice), width_(width) {
  if (width < 1) {
    throw Error(ErrorKind::InvalidArgument, "block width must be >= 1");
  }
  const int dimension = lattice_.dimension();
  block_dims_.resize(dimension);
  for (int axis = 0; axis < dimension; ++axis) {
    block_dims_[axis] = (lattice_.dims()[axis] + width - 1) / width;
  }
  int m = 1;
  for (int side : block_dims_) {
    m *= side;
  }
  blocks_.assign(m, {});
  block_of_qubit_.assign(lattice_.qubit_count(), -1);

  std::vector<int> block_strides(dimension, 1);
  for (int axis = dimension - 2; axis >= 0; --axis) {
    block_strides[axis] = block_strides[axis + 1] * block_dims_[axis + 1];
  }
  for (int q = 0; q < lattice_.qubit_count(); ++q) {
    const auto c = lattice_.coords(q);
    int b = 0;
    for (int axis = 0; axis < dimension; ++axis) {
      b += (c[axis] / width) * block_strides[axis];
    }
    block_of_qubit_[q] = b;
    blocks_[b].push_back(q);
  }

  neighbors_.assign(m, {});
  for (int a = 0; a < m; ++a) {
    std::vector<int> ca(dimension);
    int rest = a;
    for (int axis = 0; axis < dimension; ++axis) {
      ca[axis] = rest / block_strides[axis];
      rest %= block_strides[axis];
    }
    // Enumerate the Moore neighbourhood of the block coordinate.
    std::vector<int> offset(dimension, -1);
    while (true) {
      bool in_range = true;
      int b = 0;
      bool all_zero = true;
      for (int axis = 0; axis < dimension; ++axis) {
        const int moved = ca[axis] + offset[axis];
        if (moved < 0 || moved >= block_dims_[axis]) {
          in_range = false;
          break;
        }
        if (offset[axis] != 0) {
          all_zero = false;
        }
        b += moved * block_strides[axis];
      }
      if (in_range && !all_zero) {
        neighbors_[a].push_back(b);
      }
      int axis = dimension - 1;
      while (axis >= 0 && offset[axis] == 1) {
        offset[axis] = -1;
        --axis;
      }
      if (axis < 0) {
        break;
      }
      ++offset[axis];
    }
    std::sort(neighbors_[a].begin(), neighbors_[a].end());
  }
}

const std::vector<int>& SublatticeGrid::block(int b) const {
  if (b < 0 || b >= block_count()) {
    throw Error(ErrorKind::InvalidArgument, "block index out of range");
  }
  return blocks_[b];
}

int SublatticeGrid::block_of(int qubit) const {
  if (qubit < 0 || qubit >= lattice_.qubit_count()) {
    throw Error(ErrorKind::InvalidArgument, "qubit index out of range");
  }
  return block_of_qubit_[qubit];
}

bool SublatticeGrid::blocks_adjacent(int a, int b) const {
  const auto& nb = block_neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

const std::vector<int>& SublatticeGrid::block_neighbors(int b) const {
  if (b < 0 || b >= block_count()) {
    throw Error(ErrorKind::InvalidArgument, "block index out of range");
  }
  return neighbors_[b];
}

std::vector<int> SublatticeGrid::boundary(std::span<const int> blocks,
                                          int ell) const {
  if (ell < 0) {
    throw Error(ErrorKind::InvalidArgument, "boundary depth must be >= 0");
  }
  std::vector<int> dist(block_count(), -1);
  std::deque<int> frontier;
  for (int b : blocks) {
    if (b < 0 || b >= block_count()) {
      throw Error(ErrorKind::InvalidArgument, "block index out of range");
    }
    dist[b] = 0;
    frontier.push_back(b);
  }
  while (!frontier.empty()) {
    const int b = frontier.front();
    frontier.pop_front();
    if (dist[b] == ell) {
      continue;
    }
    for (int nb : neighbors_[b]) {
      if (dist[nb] < 0) {
        dist[nb] = dist[b] + 1;
        frontier.push_back(nb);
      }
    }
  }
  std::vector<int> out;
  for (int b = 0; b < block_count(); ++b) {
    if (dist[b] > 0) {
      out.push_back(b);
    }
  }
  return out;
}

std::vector<int> SublatticeGrid::qubits_of(std::span<const int> blocks) const {
  std::vector<int> out;
  for (int b : blocks) {
    const auto& qs = block(b);
    out.insert(out.end(), qs.begin(), qs.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LightconeTrace reverse_lightcone(const Circuit& circuit,
                                 std::span<const int> region) {
  const int n = circuit.qubit_count();
  std::set<int> current;
  for (int q : region) {
    if (q < 0 || q >= n) {
      throw Error(ErrorKind::InvalidArgument,
                  "lightcone region references qubit out of range");
    }
    current.insert(q);
  }
  const int depth = circuit.depth();
  LightconeTrace trace;
  trace.levels.assign(depth + 1, {});
  trace.levels[depth].assign(current.begin(), current.end());
  for (int layer = depth - 1; layer >= 0; --layer) {
    // A gate in layer `layer+1` (1-based) must not cross the boundary of
    // L_layer, so any gate touching the current set pulls in all its targets.
    for (const Gate& gate : circuit.layers()[layer]) {
      const bool touches =
          std::any_of(gate.targets.begin(), gate.targets.end(),
                      [&](int q) { return current.count(q) > 0; });
      if (touches) {
        current.insert(gate.targets.begin(), gate.targets.end());
      }
    }
    trace.levels[layer].assign(current.begin(), current.end());
  }
  return trace;
}

std::vector<std::vector<int>> connected_components(
    const SublatticeGrid& grid, std::span<const int> subset) {
  std::set<int> pending;
  for (int b : subset) {
    if (b < 0 || b >= grid.block_count()) {
      throw Error(ErrorKind::InvalidArgument, "block index out of range");
    }
    pending.insert(b);
  }
  std::vector<std::vector<int>> components;
  while (!pending.empty()) {
    std::vector<int> component;
    std::deque<int> frontier{*pending.begin()};
    pending.erase(pending.begin());
    while (!frontier.empty()) {
      const int b = frontier.front();
      frontier.pop_front();
      component.push_back(b);
      for (int nb : grid.block_neighbors(b)) {
        auto it = pending.find(nb);
        if (it != pending.end()) {
          pending.erase(it);
          frontier.push_back(nb);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  std::sort(components.begin(), components.end());
  return components;
}

int critical_depth(double p, int dimension, double c) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "noise strength must lie strictly inside (0,1)");
  }
  if (dimension < 1) {
    throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  }
  if (!(c >= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold factor c must be >= 1");
  }
  const double target = 1.0 / c;
  auto value = [&](int d) {
    return std::pow(1.0 - p, d) * std::pow(4.0 * d, dimension);
  };
  int last_violation = 0;
  constexpr int kMaxDepth = 100'000'000;
  for (int d = 1; d <= kMaxDepth; ++d) {
    if (value(d) >= target) {
      last_violation = d;
      continue;
    }
    // Once past the peak of the unimodal profile the value only shrinks.
    const bool decreasing =
        (1.0 - p) * std::pow(1.0 + 1.0 / d, dimension) < 1.0;
    if (decreasing) {
      return last_violation + 1;
    }
  }
  throw Error(ErrorKind::Numeric, "critical depth scan did not terminate");
}

}  // namespace nlqs
