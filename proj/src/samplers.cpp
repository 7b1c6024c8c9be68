// SPDX-License-Identifier: Apache-2.0
#include "samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "common.hpp"
#include "rng.hpp"
#include "statevector.hpp"

namespace nlqs {

namespace {

constexpr double kZeroMassTol = 1e-12;

// Prefix-mass pyramid over a full-register distribution: level[i] holds the
// masses of all i-bit prefixes, level[n] is the distribution itself.
std::vector<Eigen::VectorXd> mass_levels(const Eigen::VectorXd& dist, int n) {
  std::vector<Eigen::VectorXd> levels(n + 1);
  levels[n] = dist;
  for (int i = n - 1; i >= 0; --i) {
    levels[i].resize(Eigen::Index{1} << i);
    for (Eigen::Index x = 0; x < levels[i].size(); ++x) {
      levels[i][x] = levels[i + 1][2 * x] + levels[i + 1][2 * x + 1];
    }
  }
  return levels;
}

// Prefix tables for bit-by-bit exact sampling. The final prefix is the full
// register, so the dense guard is the binding constraint.
std::vector<Eigen::VectorXd> exact_prefix_tables(const Circuit& circuit) {
  const int n = circuit.qubit_count();
  check_dense_guard(n, "sample_exact prefix marginals");
  return mass_levels(diagonal_distribution(simulate(circuit)), n);
}

std::uint64_t sample_from_levels(const std::vector<Eigen::VectorXd>& levels,
                                 int n, Rng& rng) {
  std::uint64_t bits = 0;
  for (int i = 0; i < n; ++i) {
    const double mass = levels[i][bits];
    if (mass <= kZeroMassTol) {
      throw Error(ErrorKind::Conditioning,
                  "sampled prefix has vanishing probability");
    }
    const double p0 = levels[i + 1][2 * bits] / mass;
    const int bit = rng.uniform() < p0 ? 0 : 1;
    bits = 2 * bits + bit;
  }
  return bits;
}

}  // namespace

std::string bits_to_string(std::uint64_t bits, int n) {
  std::string out(n, '0');
  for (int pos = 0; pos < n; ++pos) {
    if ((bits >> (n - 1 - pos)) & 1) {
      out[pos] = '1';
    }
  }
  return out;
}

SampleBatch sample_uniform(int n, std::uint64_t seed, long count) {
  if (n < 1 || n > 64) {
    throw Error(ErrorKind::InvalidArgument, "need between 1 and 64 qubits");
  }
  SampleBatch batch;
  batch.n = n;
  batch.method = "uniform";
  batch.seed = seed;
  batch.generator = Rng::kName;
  Rng rng(seed);
  for (long s = 0; s < count; ++s) {
    std::uint64_t bits = 0;
    for (int pos = 0; pos < n; ++pos) {
      bits = (bits << 1) | rng.below(2);
    }
    batch.bitstrings.push_back(bits_to_string(bits, n));
  }
  return batch;
}

SampleBatch sample_exact(const Circuit& circuit, std::uint64_t seed,
                         long count) {
  const int n = circuit.qubit_count();
  SampleBatch batch;
  batch.n = n;
  batch.method = "exact";
  batch.seed = seed;
  batch.generator = Rng::kName;
  const auto levels = exact_prefix_tables(circuit);
  Rng rng(seed);
  for (long s = 0; s < count; ++s) {
    batch.bitstrings.push_back(
        bits_to_string(sample_from_levels(levels, n, rng), n));
  }
  return batch;
}

namespace {

int draw_pauli_code(Rng& rng, double p) {
  if (p == 0.0) {
    return 0;
  }
  const double u = rng.uniform();
  const double quarter = p / 4.0;
  if (u >= 3.0 * quarter) {
    return 0;
  }
  return 1 + static_cast<int>(u / quarter);
}

}  // namespace

SampleBatch sample_trajectory(const Circuit& circuit, std::uint64_t seed,
                              long count) {
  const int n = circuit.qubit_count();
  check_statevector_guard(n, "sample_trajectory");
  SampleBatch batch;
  batch.n = n;
  batch.method = "trajectory";
  batch.seed = seed;
  batch.generator = Rng::kName;
  Rng rng(seed);
  const double p = circuit.noise();
  for (long s = 0; s < count; ++s) {
    Statevector psi(n);
    for (const auto& layer : circuit.layers()) {
      for (const Gate& gate : layer) {
        psi.apply_gate(gate);
      }
      for (int q = 0; q < n; ++q) {
        const int code = draw_pauli_code(rng, p);
        if (code != 0) {
          psi.apply_pauli(q, code);
        }
      }
    }
    batch.bitstrings.push_back(bits_to_string(psi.sample_measurement(rng), n));
  }
  return batch;
}

namespace {

// Evaluation state for rho_{sparse,k} marginals. The inclusion-exclusion
// terms with |A| <= k are enumerated literally; every (A, B) pair leaves the
// blocks K = A \ B undepolarized, so terms are grouped by K with the signed
// multiplicity they accumulate, and the dephased marginal on each kept block
// set is lightcone-simulated once.
struct SparseContext {
  struct Group {
    std::uint64_t kept_mask = 0;
    double weight = 0.0;
    std::vector<int> kept_qubits;
    std::vector<Eigen::VectorXd> levels;  // prefix-mass pyramid on kept_qubits
  };

  const SublatticeGrid& grid;
  int n;
  std::vector<Group> groups;

  SparseContext(const Circuit& circuit, const SublatticeGrid& g, int k)
      : grid(g), n(circuit.qubit_count()) {
    if (k < 0) {
      throw Error(ErrorKind::InvalidArgument, "k must be >= 0");
    }
    if (n > 64) {
      throw Error(ErrorKind::Guard, "sparse sampler is limited to 64 qubits");
    }
    const int m = grid.block_count();
    if (m > 16) {
      throw Error(ErrorKind::Guard,
                  "sparse sampler is limited to 16 sublattices");
    }
    std::map<std::uint64_t, double> weights;
    for (std::uint64_t a_mask = 0; a_mask < (std::uint64_t{1} << m); ++a_mask) {
      if (std::popcount(a_mask) > k) {
        continue;
      }
      std::uint64_t b_mask = a_mask;
      while (true) {
        const double sign = (std::popcount(b_mask) % 2 == 0) ? 1.0 : -1.0;
        weights[a_mask & ~b_mask] += sign;
        if (b_mask == 0) {
          break;
        }
        b_mask = (b_mask - 1) & a_mask;
      }
    }
    for (const auto& [mask, weight] : weights) {
      if (weight == 0.0) {
        continue;
      }
      Group group;
      group.kept_mask = mask;
      group.weight = weight;
      std::vector<int> blocks;
      for (int b = 0; b < m; ++b) {
        if ((mask >> b) & 1) {
          blocks.push_back(b);
        }
      }
      group.kept_qubits = grid.qubits_of(blocks);
      if (group.kept_qubits.empty()) {
        group.levels = {Eigen::VectorXd::Ones(1)};
      } else {
        const Eigen::VectorXd dist =
            marginal_distribution(
                simulate_lightcone(circuit, group.kept_qubits),
                group.kept_qubits)
                .probs();
        group.levels =
            mass_levels(dist, static_cast<int>(group.kept_qubits.size()));
      }
      groups.push_back(std::move(group));
    }
  }

  // Quasi-probability of `bits` on the prefix [0, len); the kept qubits of a
  // group that fall inside a prefix are a prefix of the group register.
  double prefix_quasi(int len, std::uint64_t bits) const {
    double total = 0.0;
    for (const Group& group : groups) {
      const auto cut = std::lower_bound(group.kept_qubits.begin(),
                                        group.kept_qubits.end(), len);
      const int kept_in_prefix =
          static_cast<int>(cut - group.kept_qubits.begin());
      std::uint64_t kept_bits = 0;
      for (int j = 0; j < kept_in_prefix; ++j) {
        const int q = group.kept_qubits[j];
        kept_bits = (kept_bits << 1) | ((bits >> (len - 1 - q)) & 1);
      }
      const int uniform_qubits = len - kept_in_prefix;
      total += group.weight * std::ldexp(1.0, -uniform_qubits) *
               group.levels[kept_in_prefix][kept_bits];
    }
    return total;
  }

  double subset_quasi(std::span<const int> subset, std::uint64_t bits) const {
    double total = 0.0;
    for (const Group& group : groups) {
      std::vector<int> inside_positions;  // positions within the group register
      std::vector<int> subset_positions;  // matching positions within `subset`
      for (std::size_t j = 0; j < subset.size(); ++j) {
        const auto it =
            std::lower_bound(group.kept_qubits.begin(),
                             group.kept_qubits.end(), subset[j]);
        if (it != group.kept_qubits.end() && *it == subset[j]) {
          inside_positions.push_back(
              static_cast<int>(it - group.kept_qubits.begin()));
          subset_positions.push_back(static_cast<int>(j));
        }
      }
      const int kq = static_cast<int>(group.kept_qubits.size());
      const auto& table = group.levels[kq];
      double matched = 0.0;
      for (Eigen::Index v = 0; v < table.size(); ++v) {
        bool ok = true;
        for (std::size_t j = 0; j < inside_positions.size(); ++j) {
          const std::uint64_t have = (static_cast<std::uint64_t>(v) >>
                                      (kq - 1 - inside_positions[j])) &
                                     1;
          const std::uint64_t want =
              (bits >> (subset.size() - 1 - subset_positions[j])) & 1;
          if (have != want) {
            ok = false;
            break;
          }
        }
        if (ok) {
          matched += table[v];
        }
      }
      const int uniform_qubits =
          static_cast<int>(subset.size() - inside_positions.size());
      total += group.weight * std::ldexp(1.0, -uniform_qubits) * matched;
    }
    return total;
  }
};

struct ClampedStep {
  double p0 = 0.0;
  double clamped = 0.0;
  bool clamp_occurred = false;
  bool dead = false;  // sanitized mass vanished
};

ClampedStep sanitize_pair(double q0, double q1) {
  ClampedStep step;
  const double c0 = std::max(q0, 0.0);
  const double c1 = std::max(q1, 0.0);
  step.clamped = std::max(0.0, -q0) + std::max(0.0, -q1);
  step.clamp_occurred = q0 < 0.0 || q1 < 0.0;
  const double total = c0 + c1;
  if (total <= kZeroMassTol) {
    step.dead = true;
    return step;
  }
  step.p0 = c0 / total;
  return step;
}

}  // namespace

double sparse_marginal(const Circuit& circuit, const SublatticeGrid& grid,
                       int k, std::span<const int> subset,
                       std::uint64_t bits) {
  std::vector<int> sorted(subset.begin(), subset.end());
  if (!std::is_sorted(sorted.begin(), sorted.end()) ||
      std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::InvalidArgument,
                "marginal subset must be strictly increasing");
  }
  const SparseContext context(circuit, grid, k);
  return context.subset_quasi(sorted, bits);
}

SampleBatch sample_sparse(const Circuit& circuit, const SublatticeGrid& grid,
                          int k, std::uint64_t seed, long count) {
  const int n = circuit.qubit_count();
  const SparseContext context(circuit, grid, k);
  SampleBatch batch;
  batch.n = n;
  batch.method = "sparse";
  batch.seed = seed;
  batch.generator = Rng::kName;
  Rng rng(seed);
  for (long s = 0; s < count; ++s) {
    std::uint64_t bits = 0;
    for (int i = 0; i < n; ++i) {
      const double q0 = context.prefix_quasi(i + 1, 2 * bits);
      const double q1 = context.prefix_quasi(i + 1, 2 * bits + 1);
      const ClampedStep step = sanitize_pair(q0, q1);
      batch.clamped_mass += step.clamped;
      if (step.clamp_occurred) {
        ++batch.clamp_events;
      }
      if (step.dead) {
        throw Error(ErrorKind::Conditioning,
                    "sparse sampler conditioned on a prefix whose sanitized "
                    "probability is 0");
      }
      const int bit = rng.uniform() < step.p0 ? 0 : 1;
      bits = 2 * bits + bit;
    }
    batch.bitstrings.push_back(bits_to_string(bits, n));
  }
  return batch;
}

namespace {

// Per-block tables for the patching sampler.
struct PatchingContext {
  struct Step {
    std::vector<int> block_qubits;
    std::vector<int> boundary_qubits;
    Eigen::VectorXd joint;                 // over sorted(block + boundary)
    std::vector<std::uint32_t> block_part;
    std::vector<std::uint32_t> boundary_part;
    Eigen::VectorXd unconditional;         // marginal on the block
    std::map<std::uint64_t, Eigen::VectorXd> conditionals;
    std::map<std::uint64_t, bool> fallback;
  };

  std::vector<Step> steps;
  int n = 0;

  PatchingContext(const Circuit& circuit, const SublatticeGrid& grid,
                  int ell) {
    if (ell < 0) {
      throw Error(ErrorKind::InvalidArgument, "ell must be >= 0");
    }
    if (circuit.qubit_count() > 64) {
      throw Error(ErrorKind::Guard, "patching sampler is limited to 64 qubits");
    }
    n = circuit.qubit_count();
    const int m = grid.block_count();
    for (int b = 0; b < m; ++b) {
      Step step;
      step.block_qubits = grid.block(b);
      const std::vector<int> seed_block{b};
      std::vector<int> boundary_blocks;
      for (int nb : grid.boundary(seed_block, ell)) {
        if (nb < b) {
          boundary_blocks.push_back(nb);
        }
      }
      step.boundary_qubits = grid.qubits_of(boundary_blocks);
      std::vector<int> region = step.block_qubits;
      region.insert(region.end(), step.boundary_qubits.begin(),
                    step.boundary_qubits.end());
      std::sort(region.begin(), region.end());
      step.joint =
          marginal_distribution(simulate_lightcone(circuit, region), region)
              .probs();
      const int r = static_cast<int>(region.size());
      step.block_part.assign(step.joint.size(), 0);
      step.boundary_part.assign(step.joint.size(), 0);
      for (Eigen::Index v = 0; v < step.joint.size(); ++v) {
        std::uint32_t qb = 0;
        std::uint32_t gb = 0;
        for (int pos = 0; pos < r; ++pos) {
          const std::uint32_t bit = (static_cast<std::uint64_t>(v) >>
                                     (r - 1 - pos)) &
                                    1;
          if (std::binary_search(step.block_qubits.begin(),
                                 step.block_qubits.end(), region[pos])) {
            qb = (qb << 1) | bit;
          } else {
            gb = (gb << 1) | bit;
          }
        }
        step.block_part[v] = qb;
        step.boundary_part[v] = gb;
      }
      const auto block_dim = Eigen::Index{1} << step.block_qubits.size();
      step.unconditional = Eigen::VectorXd::Zero(block_dim);
      for (Eigen::Index v = 0; v < step.joint.size(); ++v) {
        step.unconditional[step.block_part[v]] += step.joint[v];
      }
      const double total = step.unconditional.sum();
      if (total > 0.0) {
        step.unconditional /= total;
      }
      steps.push_back(std::move(step));
    }
  }

  // Conditional distribution of block `b` given boundary bits; falls back to
  // the unconditional block marginal on a zero-probability boundary.
  const Eigen::VectorXd& conditional(int b, std::uint64_t boundary_bits,
                                     bool* fell_back) {
    Step& step = steps[b];
    auto it = step.conditionals.find(boundary_bits);
    if (it == step.conditionals.end()) {
      const auto block_dim = Eigen::Index{1} << step.block_qubits.size();
      Eigen::VectorXd cond = Eigen::VectorXd::Zero(block_dim);
      double denom = 0.0;
      for (Eigen::Index v = 0; v < step.joint.size(); ++v) {
        if (step.boundary_part[v] == boundary_bits) {
          cond[step.block_part[v]] += step.joint[v];
          denom += step.joint[v];
        }
      }
      bool fallback = false;
      if (denom <= kZeroMassTol) {
        cond = step.unconditional;
        fallback = true;
      } else {
        cond /= denom;
      }
      it = step.conditionals.emplace(boundary_bits, std::move(cond)).first;
      step.fallback.emplace(boundary_bits, fallback);
    }
    if (fell_back != nullptr) {
      *fell_back = step.fallback[boundary_bits];
    }
    return it->second;
  }

  std::uint64_t boundary_bits_of(int b, std::uint64_t sampled_bits) const {
    const Step& step = steps[b];
    std::uint64_t gb = 0;
    for (int q : step.boundary_qubits) {
      gb = (gb << 1) | ((sampled_bits >> (n - 1 - q)) & 1);
    }
    return gb;
  }
};

}  // namespace

SampleBatch sample_patching(const Circuit& circuit, const SublatticeGrid& grid,
                            int ell, std::uint64_t seed, long count) {
  const int n = circuit.qubit_count();
  PatchingContext context(circuit, grid, ell);
  SampleBatch batch;
  batch.n = n;
  batch.method = "patching";
  batch.seed = seed;
  batch.generator = Rng::kName;
  Rng rng(seed);
  for (long s = 0; s < count; ++s) {
    std::uint64_t sampled = 0;
    for (int b = 0; b < grid.block_count(); ++b) {
      bool fell_back = false;
      const auto& cond =
          context.conditional(b, context.boundary_bits_of(b, sampled),
                              &fell_back);
      if (fell_back) {
        ++batch.fallback_events;
      }
      // Bit-by-bit within the block, row-major qubit order.
      const auto& step = context.steps[b];
      const int bq = static_cast<int>(step.block_qubits.size());
      std::uint64_t block_bits = 0;
      double mass = cond.sum();
      for (int j = 0; j < bq; ++j) {
        double zero_mass = 0.0;
        const int tail = bq - 1 - j;
        const std::uint64_t base = block_bits << (tail + 1);
        for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << tail);
             ++rest) {
          zero_mass += cond[base | rest];
        }
        if (mass <= kZeroMassTol) {
          throw Error(ErrorKind::Conditioning,
                      "patching block conditional has no mass");
        }
        const int bit = rng.uniform() < zero_mass / mass ? 0 : 1;
        block_bits = (block_bits << 1) | bit;
        mass = bit == 0 ? zero_mass : mass - zero_mass;
      }
      for (int j = 0; j < bq; ++j) {
        const int q = step.block_qubits[j];
        if ((block_bits >> (bq - 1 - j)) & 1) {
          sampled |= std::uint64_t{1} << (n - 1 - q);
        }
      }
    }
    batch.bitstrings.push_back(bits_to_string(sampled, n));
  }
  return batch;
}

Distribution sanitize(const QuasiDistribution& quasi, double* clamped_mass) {
  Eigen::VectorXd values = quasi.values;
  double clamped = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) {
      clamped += -values[i];
      values[i] = 0.0;
    }
    total += values[i];
  }
  if (clamped_mass != nullptr) {
    *clamped_mass = clamped;
  }
  if (total <= 0.0) {
    throw Error(ErrorKind::Conditioning,
                "quasi-distribution has no positive mass");
  }
  values /= total;
  return Distribution(quasi.qubits, std::move(values));
}

Eigen::VectorXd law_exact(const Circuit& circuit) {
  const int n = circuit.qubit_count();
  check_dense_guard(n, "law_exact");
  Eigen::VectorXd diag = diagonal_distribution(simulate(circuit));
  return diag / diag.sum();
}

Eigen::VectorXd law_sparse(const Circuit& circuit, const SublatticeGrid& grid,
                           int k, double* clamped_mass) {
  const int n = circuit.qubit_count();
  check_dense_guard(n, "law_sparse");
  const SparseContext context(circuit, grid, k);
  double clamped = 0.0;
  // Walk the full prefix tree; a dead prefix is never reached by the sampler
  // so its subtree carries zero law mass.
  Eigen::VectorXd level = Eigen::VectorXd::Ones(1);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(Eigen::Index{1} << (i + 1));
    for (Eigen::Index x = 0; x < level.size(); ++x) {
      const double reach = level[x];
      if (reach == 0.0) {
        continue;
      }
      const double q0 =
          context.prefix_quasi(i + 1, 2 * static_cast<std::uint64_t>(x));
      const double q1 =
          context.prefix_quasi(i + 1, 2 * static_cast<std::uint64_t>(x) + 1);
      const ClampedStep step = sanitize_pair(q0, q1);
      clamped += step.clamped;
      if (step.dead) {
        continue;
      }
      next[2 * x] = reach * step.p0;
      next[2 * x + 1] = reach * (1.0 - step.p0);
    }
    level.swap(next);
  }
  if (clamped_mass != nullptr) {
    *clamped_mass = clamped;
  }
  return level;
}

Eigen::VectorXd law_patching(const Circuit& circuit, const SublatticeGrid& grid,
                             int ell, long* fallback_events) {
  const int n = circuit.qubit_count();
  check_dense_guard(n, "law_patching");
  PatchingContext context(circuit, grid, ell);
  const auto dim = Eigen::Index{1} << n;
  Eigen::VectorXd law(dim);
  long fallbacks = 0;
  for (Eigen::Index x = 0; x < dim; ++x) {
    double q = 1.0;
    for (int b = 0; b < grid.block_count() && q > 0.0; ++b) {
      bool fell_back = false;
      const auto& cond = context.conditional(
          b, context.boundary_bits_of(b, static_cast<std::uint64_t>(x)),
          &fell_back);
      if (fell_back) {
        ++fallbacks;
      }
      const auto& step = context.steps[b];
      const int bq = static_cast<int>(step.block_qubits.size());
      std::uint64_t block_bits = 0;
      for (int j = 0; j < bq; ++j) {
        const int qubit = step.block_qubits[j];
        block_bits =
            (block_bits << 1) |
            ((static_cast<std::uint64_t>(x) >> (n - 1 - qubit)) & 1);
      }
      q *= cond[block_bits];
    }
    law[x] = q;
  }
  if (fallback_events != nullptr) {
    *fallback_events = fallbacks;
  }
  return law;
}

Eigen::VectorXd law_trajectory(const Circuit& circuit) {
  const int n = circuit.qubit_count();
  const int sites = n * circuit.depth();
  if (sites > 12) {
    throw Error(ErrorKind::Guard,
                "trajectory law enumeration is limited to 12 noise sites");
  }
  const double p = circuit.noise();
  const auto dim = Eigen::Index{1} << n;
  Eigen::VectorXd law = Eigen::VectorXd::Zero(dim);
  const std::uint64_t patterns = std::uint64_t{1} << (2 * sites);
  for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
    double prob = 1.0;
    for (int site = 0; site < sites; ++site) {
      const int code = static_cast<int>((pattern >> (2 * site)) & 3);
      prob *= (code == 0) ? 1.0 - 0.75 * p : 0.25 * p;
      if (prob == 0.0) {
        break;
      }
    }
    if (prob == 0.0) {
      continue;
    }
    Statevector psi(n);
    int site = 0;
    for (const auto& layer : circuit.layers()) {
      for (const Gate& gate : layer) {
        psi.apply_gate(gate);
      }
      for (int q = 0; q < n; ++q, ++site) {
        const int code = static_cast<int>((pattern >> (2 * site)) & 3);
        if (code != 0) {
          psi.apply_pauli(q, code);
        }
      }
    }
    law += prob * psi.probabilities();
  }
  return law;
}

}  // namespace nlqs
