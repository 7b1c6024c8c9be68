// SPDX-License-Identifier: Apache-2.0
#include "dense.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "common.hpp"

namespace nlqs {

namespace {

constexpr double kHermitianTol = 1e-9;
constexpr double kEigenvalueTol = 1e-9;
constexpr double kConditionTol = 1e-12;

std::uint64_t position_mask(int position, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - 1 - position);
}

// Indices with all `positions` bits clear, in increasing order.
std::vector<std::uint64_t> rest_indices(std::span<const int> positions,
                                        int num_qubits) {
  std::uint64_t target_mask = 0;
  for (int pos : positions) {
    target_mask |= position_mask(pos, num_qubits);
  }
  std::vector<std::uint64_t> rest;
  rest.reserve(std::size_t{1} << (num_qubits - positions.size()));
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & target_mask) == 0) {
      rest.push_back(i);
    }
  }
  return rest;
}

std::vector<int> sorted_unique(std::span<const int> qubits) {
  std::vector<int> out(qubits.begin(), qubits.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_subset(const HermitianOperator& op, std::span<const int> qubits,
                    const char* what) {
  for (int q : qubits) {
    op.position_of(q);  // throws on unknown qubit
  }
  (void)what;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& mat) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Numeric, "eigenvalue decomposition failed");
  }
  return solver.eigenvalues();
}

}  // namespace

HermitianOperator::HermitianOperator(std::vector<int> qubits,
                                     Eigen::MatrixXcd mat)
    : qubits_(std::move(qubits)), mat_(std::move(mat)) {
  if (!std::is_sorted(qubits_.begin(), qubits_.end()) ||
      std::adjacent_find(qubits_.begin(), qubits_.end()) != qubits_.end()) {
    throw Error(ErrorKind::InvalidArgument,
                "operator qubit list must be strictly increasing");
  }
  const auto dim = static_cast<Eigen::Index>(1) << qubits_.size();
  if (mat_.rows() != dim || mat_.cols() != dim) {
    throw Error(ErrorKind::InvalidArgument,
                "operator matrix dimension does not match qubit count");
  }
  const double deviation = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > kHermitianTol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max deviation " << deviation << ")";
    throw Error(ErrorKind::Numeric, msg.str());
  }
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  trace_ = mat_.trace().real();
}

int HermitianOperator::position_of(int qubit) const {
  const auto it = std::lower_bound(qubits_.begin(), qubits_.end(), qubit);
  if (it == qubits_.end() || *it != qubit) {
    throw Error(ErrorKind::InvalidArgument,
                "qubit " + std::to_string(qubit) + " not in operator register");
  }
  return static_cast<int>(it - qubits_.begin());
}

State::State(std::vector<int> qubits, Eigen::MatrixXcd mat)
    : HermitianOperator(std::move(qubits), std::move(mat)) {
  if (std::abs(trace_ - 1.0) > kHermitianTol) {
    throw Error(ErrorKind::Numeric,
                "state trace deviates from 1 by " +
                    std::to_string(std::abs(trace_ - 1.0)));
  }
}

State::State(Trusted, std::vector<int> qubits, Eigen::MatrixXcd mat)
    : State(std::move(qubits), std::move(mat)) {}

Distribution::Distribution(std::vector<int> qubits, Eigen::VectorXd probs)
    : qubits_(std::move(qubits)), probs_(std::move(probs)) {
  const auto dim = static_cast<Eigen::Index>(1) << qubits_.size();
  if (probs_.size() != dim) {
    throw Error(ErrorKind::InvalidArgument,
                "distribution length does not match qubit count");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (probs_[i] < -kConditionTol) {
      throw Error(ErrorKind::Numeric, "distribution has a negative entry");
    }
    probs_[i] = std::max(probs_[i], 0.0);
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::Numeric, "distribution does not sum to 1");
  }
}

void apply_unitary_inplace(Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u,
                           std::span<const int> positions, int num_qubits) {
  const int t = static_cast<int>(positions.size());
  const int sub_dim = 1 << t;
  // scatter[s]: bits of sub-basis index s placed at the target positions,
  // first target as the high bit.
  std::vector<std::uint64_t> scatter(sub_dim, 0);
  for (int s = 0; s < sub_dim; ++s) {
    for (int j = 0; j < t; ++j) {
      if ((s >> (t - 1 - j)) & 1) {
        scatter[s] |= position_mask(positions[j], num_qubits);
      }
    }
  }
  const auto rest = rest_indices(positions, num_qubits);
  Eigen::MatrixXcd block(sub_dim, sub_dim);
  for (std::uint64_t row_rest : rest) {
    for (std::uint64_t col_rest : rest) {
      for (int r = 0; r < sub_dim; ++r) {
        for (int c = 0; c < sub_dim; ++c) {
          block(r, c) = rho(row_rest | scatter[r], col_rest | scatter[c]);
        }
      }
      block = u * block * u.adjoint();
      for (int r = 0; r < sub_dim; ++r) {
        for (int c = 0; c < sub_dim; ++c) {
          rho(row_rest | scatter[r], col_rest | scatter[c]) = block(r, c);
        }
      }
    }
  }
}

void apply_depolarizing_inplace(Eigen::MatrixXcd& rho, int position,
                                int num_qubits, double strength) {
  if (strength == 0.0) {
    return;
  }
  const std::uint64_t mask = position_mask(position, num_qubits);
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const double keep = 1.0 - strength;
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & mask) {
      continue;
    }
    const std::uint64_t r1 = r | mask;
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (c & mask) {
        continue;
      }
      const std::uint64_t c1 = c | mask;
      const auto v00 = rho(r, c);
      const auto v11 = rho(r1, c1);
      const auto avg = 0.5 * (v00 + v11);
      rho(r, c) = keep * v00 + strength * avg;
      rho(r1, c1) = keep * v11 + strength * avg;
      rho(r, c1) *= keep;
      rho(r1, c) *= keep;
    }
  }
}

State simulate(const Circuit& circuit) {
  const int n = circuit.qubit_count();
  check_dense_guard(n, "simulate");
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  const double p = circuit.noise();
  for (const auto& layer : circuit.layers()) {
    for (const Gate& gate : layer) {
      apply_unitary_inplace(rho, gate.matrix, gate.targets, n);
    }
    for (int q = 0; q < n; ++q) {
      apply_depolarizing_inplace(rho, q, n, p);
    }
  }
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) {
    qubits[q] = q;
  }
  return State(State::Trusted{}, std::move(qubits), std::move(rho));
}

State simulate_lightcone(const Circuit& circuit, std::span<const int> region) {
  const auto trace = reverse_lightcone(circuit, region);
  const auto& cone = trace.cone();
  const int nc = static_cast<int>(cone.size());
  check_dense_guard(nc, "simulate_lightcone");

  const auto dim = static_cast<Eigen::Index>(1) << nc;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  auto local_position = [&](int q) {
    const auto it = std::lower_bound(cone.begin(), cone.end(), q);
    return static_cast<int>(it - cone.begin());
  };
  const double p = circuit.noise();
  for (int layer = 0; layer < circuit.depth(); ++layer) {
    const auto& level = trace.levels[layer];  // L_{layer}(A)
    for (const Gate& gate : circuit.layers()[layer]) {
      const bool inside = std::all_of(
          gate.targets.begin(), gate.targets.end(), [&](int q) {
            return std::binary_search(level.begin(), level.end(), q);
          });
      if (!inside) {
        continue;
      }
      std::vector<int> positions(gate.targets.size());
      std::transform(gate.targets.begin(), gate.targets.end(),
                     positions.begin(), local_position);
      apply_unitary_inplace(rho, gate.matrix, positions, nc);
    }
    for (int pos = 0; pos < nc; ++pos) {
      apply_depolarizing_inplace(rho, pos, nc, p);
    }
  }
  State cone_state(State::Trusted{}, cone, std::move(rho));
  return reduced_state(cone_state, sorted_unique(region));
}

namespace {

// Splits each full-register basis index into its kept bits and traced bits.
struct IndexSplit {
  std::vector<std::uint64_t> kept;
  std::vector<std::uint64_t> traced;
};

IndexSplit split_indices(const HermitianOperator& op,
                         std::span<const int> keep) {
  const int n = op.qubit_count();
  std::vector<char> keep_flag(n, 0);
  for (int q : keep) {
    keep_flag[op.position_of(q)] = 1;
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  IndexSplit split;
  split.kept.assign(dim, 0);
  split.traced.assign(dim, 0);
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t kept = 0;
    std::uint64_t traced = 0;
    for (int pos = 0; pos < n; ++pos) {
      const std::uint64_t bit = (idx >> (n - 1 - pos)) & 1;
      if (keep_flag[pos]) {
        kept = (kept << 1) | bit;
      } else {
        traced = (traced << 1) | bit;
      }
    }
    split.kept[idx] = kept;
    split.traced[idx] = traced;
  }
  return split;
}

Eigen::MatrixXcd partial_trace_matrix(const HermitianOperator& op,
                                      std::span<const int> keep) {
  const auto split = split_indices(op, keep);
  const auto out_dim = static_cast<Eigen::Index>(1) << keep.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  const std::uint64_t dim = std::uint64_t{1} << op.qubit_count();
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (split.traced[r] == split.traced[c]) {
        out(split.kept[r], split.kept[c]) += op.matrix()(r, c);
      }
    }
  }
  return out;
}

}  // namespace

HermitianOperator partial_trace(const HermitianOperator& op,
                                std::span<const int> keep) {
  const auto kept = sorted_unique(keep);
  require_subset(op, kept, "partial_trace");
  return HermitianOperator(kept, partial_trace_matrix(op, kept));
}

State reduced_state(const State& state, std::span<const int> keep) {
  const auto kept = sorted_unique(keep);
  require_subset(state, kept, "reduced_state");
  return State(State::Trusted{}, kept, partial_trace_matrix(state, kept));
}

namespace {

Eigen::MatrixXcd dephase_matrix(const HermitianOperator& op,
                                std::span<const int> qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) {
    mask |= std::uint64_t{1} << (op.qubit_count() - 1 - op.position_of(q));
  }
  Eigen::MatrixXcd out = op.matrix();
  const std::uint64_t dim = std::uint64_t{1} << op.qubit_count();
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      if ((r ^ c) & mask) {
        out(r, c) = 0.0;
      }
    }
  }
  return out;
}

}  // namespace

HermitianOperator dephase(const HermitianOperator& op,
                          std::span<const int> qubits) {
  return HermitianOperator(op.qubits(), dephase_matrix(op, qubits));
}

State dephase(const State& state, std::span<const int> qubits) {
  return State(state.qubits(), dephase_matrix(state, qubits));
}

Eigen::VectorXd diagonal_distribution(const State& state) {
  return state.matrix().diagonal().real();
}

Distribution marginal_distribution(const State& state,
                                   std::span<const int> subset) {
  const auto kept = sorted_unique(subset);
  require_subset(state, kept, "marginal_distribution");
  const auto split = split_indices(state, kept);
  const auto out_dim = static_cast<Eigen::Index>(1) << kept.size();
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(out_dim);
  const std::uint64_t dim = std::uint64_t{1} << state.qubit_count();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    probs[split.kept[idx]] += state.matrix()(idx, idx).real();
  }
  return Distribution(kept, std::move(probs));
}

Distribution conditional_distribution(const State& state,
                                      std::span<const int> target,
                                      std::span<const int> given,
                                      std::uint64_t given_bits) {
  const auto target_sorted = sorted_unique(target);
  const auto given_sorted = sorted_unique(given);
  for (int q : target_sorted) {
    if (std::binary_search(given_sorted.begin(), given_sorted.end(), q)) {
      throw Error(ErrorKind::InvalidArgument,
                  "conditioning qubits overlap the target subset");
    }
  }
  std::vector<int> joint = target_sorted;
  joint.insert(joint.end(), given_sorted.begin(), given_sorted.end());
  std::sort(joint.begin(), joint.end());
  const Distribution joint_dist = marginal_distribution(state, joint);

  const int k = static_cast<int>(joint.size());
  const auto t_dim = static_cast<Eigen::Index>(1) << target_sorted.size();
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(t_dim);
  double denom = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << k;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t t_bits = 0;
    std::size_t t_at = 0;
    std::size_t g_at = 0;
    bool matches = true;
    for (int pos = 0; pos < k; ++pos) {
      const std::uint64_t bit = (idx >> (k - 1 - pos)) & 1;
      if (t_at < target_sorted.size() && joint[pos] == target_sorted[t_at]) {
        t_bits = (t_bits << 1) | bit;
        ++t_at;
      } else {
        const std::uint64_t want =
            (given_bits >> (given_sorted.size() - 1 - g_at)) & 1;
        if (bit != want) {
          matches = false;
          break;
        }
        ++g_at;
      }
    }
    if (matches) {
      probs[t_bits] += joint_dist.probs()[idx];
      denom += joint_dist.probs()[idx];
    }
  }
  if (denom <= kConditionTol) {
    throw Error(ErrorKind::Conditioning,
                "conditioning event has probability <= 1e-12");
  }
  probs /= denom;
  return Distribution(target_sorted, std::move(probs));
}

namespace {

double entropy_from_eigenvalues(const Eigen::VectorXd& raw) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    double lambda = raw[i];
    if (lambda < -kEigenvalueTol || lambda > 1.0 + kEigenvalueTol) {
      std::ostringstream msg;
      msg << "state eigenvalue " << lambda << " outside [0,1] tolerance";
      throw Error(ErrorKind::Numeric, msg.str());
    }
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) {
      s -= lambda * std::log2(lambda);
    }
  }
  return s;
}

}  // namespace

double von_neumann_entropy(const State& state) {
  return entropy_from_eigenvalues(hermitian_eigenvalues(state.matrix()));
}

double conditional_entropy(const State& state, std::span<const int> a) {
  const auto a_sorted = sorted_unique(a);
  require_subset(state, a_sorted, "conditional_entropy");
  std::vector<int> complement;
  for (int q : state.qubits()) {
    if (!std::binary_search(a_sorted.begin(), a_sorted.end(), q)) {
      complement.push_back(q);
    }
  }
  const double joint = von_neumann_entropy(state);
  const double rest =
      complement.empty() ? 0.0
                         : von_neumann_entropy(reduced_state(state, complement));
  return joint - rest;
}

double relative_entropy_to_depolarized(const State& state,
                                       std::span<const int> a) {
  const auto a_sorted = sorted_unique(a);
  return static_cast<double>(a_sorted.size()) -
         conditional_entropy(state, a_sorted);
}

double trace_norm(const HermitianOperator& op) {
  return hermitian_eigenvalues(op.matrix()).cwiseAbs().sum();
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.qubits() != b.qubits()) {
    throw Error(ErrorKind::InvalidArgument,
                "trace_distance operands act on different registers");
  }
  return hermitian_eigenvalues(a.matrix() - b.matrix()).cwiseAbs().sum();
}

}  // namespace nlqs
