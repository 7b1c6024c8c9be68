// SPDX-License-Identifier: Apache-2.0
#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "common.hpp"
#include "rng.hpp"
#include "samplers.hpp"
#include "statevector.hpp"

namespace nlqs {

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::vector<int> sorted_unique(std::span<const int> values) {
  std::vector<int> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ipow(double base, int exponent) {
  return std::pow(base, static_cast<double>(exponent));
}

}  // namespace

void BoundReport::finish() {
  slack = bound - measured;
  pass = slack >= -kSlackTol;
}

void BoundReport::add_param(const std::string& key, const std::string& value) {
  params.emplace_back(key, value);
}

void BoundReport::add_param(const std::string& key, double value) {
  params.emplace_back(key, format_double(value));
}

void BoundReport::add_param(const std::string& key, long value) {
  params.emplace_back(key, std::to_string(value));
}

void BoundReport::add_param(const std::string& key,
                            std::span<const int> values) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? "," : "") << values[i];
  }
  out << ']';
  params.emplace_back(key, out.str());
}

BoundReport check_entropy_production(const State& state, std::span<const int> a,
                                     double p) {
  const auto a_sorted = sorted_unique(a);
  if (a_sorted.empty()) {
    throw Error(ErrorKind::InvalidArgument, "subset A must be non-empty");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p must lie in [0,1]");
  }
  Eigen::MatrixXcd noisy = state.matrix();
  for (int q : a_sorted) {
    apply_depolarizing_inplace(noisy, state.position_of(q),
                               state.qubit_count(), p);
  }
  const State after(state.qubits(), std::move(noisy));
  const double lhs = conditional_entropy(after, a_sorted);
  const double rhs = (1.0 - p) * conditional_entropy(state, a_sorted) +
                     p * static_cast<double>(a_sorted.size());
  BoundReport report;
  report.name = "entropy_production";
  report.measured = rhs;
  report.bound = lhs;
  report.add_param("A", std::span<const int>(a_sorted));
  report.add_param("p", p);
  report.add_param("lhs_entropy_after", lhs);
  report.add_param("rhs_required_min", rhs);
  report.finish();
  return report;
}

BoundReport check_subset_monotonicity(const State& state,
                                      std::span<const int> a,
                                      std::span<const int> b) {
  const auto a_sorted = sorted_unique(a);
  const auto b_sorted = sorted_unique(b);
  if (!std::includes(b_sorted.begin(), b_sorted.end(), a_sorted.begin(),
                     a_sorted.end())) {
    throw Error(ErrorKind::InvalidArgument, "A must be a subset of B");
  }
  BoundReport report;
  report.name = "subset_monotonicity";
  report.measured = relative_entropy_to_depolarized(state, a_sorted);
  report.bound = relative_entropy_to_depolarized(state, b_sorted);
  report.add_param("A", std::span<const int>(a_sorted));
  report.add_param("B", std::span<const int>(b_sorted));
  report.finish();
  return report;
}

BoundReport check_decay_bound(const Circuit& circuit, std::span<const int> a) {
  return check_decay_bound(circuit, simulate(circuit), a);
}

BoundReport check_decay_bound(const Circuit& circuit, const State& state,
                              std::span<const int> a) {
  const auto a_sorted = sorted_unique(a);
  const auto cone = reverse_lightcone(circuit, a_sorted).cone();
  BoundReport report;
  report.name = "circuit_decay";
  report.measured = relative_entropy_to_depolarized(state, a_sorted);
  report.bound = ipow(1.0 - circuit.noise(), circuit.depth()) *
                 static_cast<double>(cone.size());
  report.add_param("A", std::span<const int>(a_sorted));
  report.add_param("lightcone_size", static_cast<long>(cone.size()));
  report.add_param("d", static_cast<long>(circuit.depth()));
  report.add_param("p", circuit.noise());
  report.finish();
  return report;
}

std::vector<BoundReport> check_sublattice_decay(const Circuit& circuit,
                                                const SublatticeGrid& grid) {
  return check_sublattice_decay(circuit, simulate(circuit), grid);
}

std::vector<BoundReport> check_sublattice_decay(const Circuit& circuit,
                                                const State& state,
                                                const SublatticeGrid& grid) {
  const int d = circuit.depth();
  const int dimension = circuit.lattice().dimension();
  const double decay = ipow(1.0 - circuit.noise(), d);
  const double literal = decay * ipow(4.0 * d, dimension);
  const bool literal_valid = d >= 1 && grid.width() <= 2 * d;
  std::vector<BoundReport> reports;
  for (int b = 0; b < grid.block_count(); ++b) {
    const auto& qubits = grid.block(b);
    const auto cone = reverse_lightcone(circuit, qubits).cone();
    BoundReport report;
    report.name = "sublattice_decay";
    report.measured = relative_entropy_to_depolarized(state, qubits);
    report.bound =
        literal_valid ? literal : decay * static_cast<double>(cone.size());
    report.add_param("block", static_cast<long>(b));
    report.add_param("width", static_cast<long>(grid.width()));
    report.add_param("d", static_cast<long>(d));
    report.add_param("p", circuit.noise());
    report.add_param("cap_bound_4d", literal);
    report.add_param("lightcone_bound",
                     decay * static_cast<double>(cone.size()));
    report.add_param("width_matches_2d",
                     grid.width() == 2 * d ? "true" : "false");
    report.finish();
    reports.push_back(std::move(report));
  }
  return reports;
}

BoundReport check_ie_norm_bound(const Circuit& circuit,
                                const SublatticeGrid& grid,
                                std::span<const int> a) {
  return check_ie_norm_bound(circuit, simulate(circuit), grid, a);
}

BoundReport check_ie_norm_bound(const Circuit& circuit, const State& state,
                                const SublatticeGrid& grid,
                                std::span<const int> a) {
  const auto blocks = sorted_unique(a);
  const int d = circuit.depth();
  const int dimension = circuit.lattice().dimension();
  const double bracket =
      ipow(1.0 - circuit.noise(), d) * ipow(4.0 * d, dimension);
  const int size = static_cast<int>(blocks.size());
  const double trivial = std::ldexp(1.0, size);
  double bound = trivial;
  if (bracket < 1.0) {
    const double exponent = 1.0 / (2.0 * ipow(3.0, dimension));
    bound = std::min(trivial, ipow(2.0 * std::pow(bracket, exponent), size));
  }
  BoundReport report;
  report.name = "ie_norm_bound";
  report.measured = trace_norm(inclusion_exclusion_m(state, grid, blocks));
  report.bound = bound;
  // The bracket branch is only established at width exactly 2d; the
  // triangle bound 2^|A| holds unconditionally.
  report.applicable = bracket >= 1.0 || grid.width() == 2 * d;
  report.add_param("A_blocks", std::span<const int>(blocks));
  report.add_param("bracket", bracket);
  report.add_param("trivial_bound", trivial);
  report.add_param("width", static_cast<long>(grid.width()));
  report.add_param("d", static_cast<long>(d));
  report.add_param("p", circuit.noise());
  int max_cone = 0;
  for (int b = 0; b < grid.block_count(); ++b) {
    max_cone = std::max(
        max_cone,
        static_cast<int>(reverse_lightcone(circuit, grid.block(b)).cone().size()));
  }
  report.add_param("lightcone_bracket", ipow(1.0 - circuit.noise(), d) *
                                            static_cast<double>(max_cone));
  report.finish();
  return report;
}

namespace {

struct TruncationParams {
  std::string scheme;
  std::string bound_formula;
  double bound = 0.0;
};

TruncationParams truncation_params(TruncationScheme scheme, int parameter,
                                   int n) {
  TruncationParams out;
  if (scheme == TruncationScheme::Sparse) {
    out.scheme = "sparse";
    out.bound_formula = "exp(-k ln n)";
    out.bound = std::pow(static_cast<double>(n), -parameter);
  } else {
    out.scheme = "percolated";
    out.bound_formula = "n exp(-ell)";
    out.bound = static_cast<double>(n) * std::exp(-parameter);
  }
  return out;
}

BoundReport truncation_report(const Circuit& circuit, TruncationScheme scheme,
                              int parameter, double measured) {
  const int n = circuit.qubit_count();
  const auto params = truncation_params(scheme, parameter, n);
  BoundReport report;
  report.name = "truncation_error_" + params.scheme;
  report.measured = measured;
  report.bound = params.bound;
  int d_star = -1;
  if (circuit.noise() > 0.0) {
    d_star =
        critical_depth(circuit.noise(), circuit.lattice().dimension(), 1.0);
  }
  report.applicable = d_star >= 1 && circuit.depth() >= d_star;
  report.add_param(params.scheme == "sparse" ? "k" : "ell",
                   static_cast<long>(parameter));
  report.add_param("bound_formula", params.bound_formula);
  report.add_param("d_star_c1", static_cast<long>(d_star));
  report.add_param("d", static_cast<long>(circuit.depth()));
  report.add_param("p", circuit.noise());
  report.finish();
  return report;
}

}  // namespace

BoundReport truncation_error(const Circuit& circuit, const SublatticeGrid& grid,
                             TruncationScheme scheme, int parameter) {
  const State state = simulate(circuit);
  const PauliDecomposition dec = pauli_decompose(state);
  const PauliDecomposition truncated =
      scheme == TruncationScheme::Sparse
          ? truncate_sparse(dec, grid, parameter)
          : truncate_percolated(dec, grid, parameter);
  const double measured =
      trace_distance(state, pauli_reconstruct(truncated));
  return truncation_report(circuit, scheme, parameter, measured);
}

std::vector<BoundReport> truncation_error_sweep(const Circuit& circuit,
                                                const State& state,
                                                const SublatticeGrid& grid) {
  const int n = state.qubit_count();
  const int m = grid.block_count();
  const PauliDecomposition dec = pauli_decompose(state);
  const auto dim = Eigen::Index{1} << n;
  const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << n);
  // Bucket the decomposition once by support size and by largest connected
  // component, then sweep cumulative reconstructions.
  std::vector<Eigen::MatrixXcd> by_size(
      m + 1, Eigen::MatrixXcd::Zero(dim, dim));
  std::vector<Eigen::MatrixXcd> by_component(
      m + 1, Eigen::MatrixXcd::Zero(dim, dim));
  for (const auto& [word, coeff] : dec.coefficients()) {
    const PauliString p(n, word);
    const SupportProfile profile = support_profile(p, grid);
    add_pauli_to_matrix(by_size[profile.block_count], p, coeff * scale);
    add_pauli_to_matrix(by_component[profile.max_component], p, coeff * scale);
  }
  std::vector<BoundReport> reports;
  Eigen::MatrixXcd cumulative = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k <= m; ++k) {
    cumulative += by_size[k];
    const double measured =
        trace_norm(HermitianOperator(state.qubits(),
                                     state.matrix() - cumulative));
    reports.push_back(
        truncation_report(circuit, TruncationScheme::Sparse, k, measured));
  }
  cumulative = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ell = 0; ell <= m; ++ell) {
    cumulative += by_component[ell];
    const double measured =
        trace_norm(HermitianOperator(state.qubits(),
                                     state.matrix() - cumulative));
    reports.push_back(
        truncation_report(circuit, TruncationScheme::Percolated, ell,
                          measured));
  }
  return reports;
}

namespace {

// || P_U - P_AB P_{C|B} ||_1 over the marginal of `full` on U = A + B + C.
double distribution_markov_gap(const Eigen::VectorXd& full, int n,
                               std::span<const int> a, std::span<const int> b,
                               std::span<const int> c) {
  std::vector<int> u(a.begin(), a.end());
  u.insert(u.end(), b.begin(), b.end());
  u.insert(u.end(), c.begin(), c.end());
  std::sort(u.begin(), u.end());
  if (std::adjacent_find(u.begin(), u.end()) != u.end()) {
    throw Error(ErrorKind::InvalidArgument, "A, B, C must be disjoint");
  }
  const int k = static_cast<int>(u.size());
  Eigen::VectorXd joint = Eigen::VectorXd::Zero(Eigen::Index{1} << k);
  for (Eigen::Index x = 0; x < full.size(); ++x) {
    std::uint64_t bits = 0;
    for (int q : u) {
      bits = (bits << 1) | ((static_cast<std::uint64_t>(x) >> (n - 1 - q)) & 1);
    }
    joint[bits] += full[x];
  }
  // Position classes within U.
  std::vector<int> cls(k, 2);  // 0 = A, 1 = B, 2 = C
  for (int pos = 0; pos < k; ++pos) {
    if (std::find(a.begin(), a.end(), u[pos]) != a.end()) {
      cls[pos] = 0;
    } else if (std::find(b.begin(), b.end(), u[pos]) != b.end()) {
      cls[pos] = 1;
    }
  }
  const int ab_count = static_cast<int>(a.size() + b.size());
  const int bc_count = static_cast<int>(b.size() + c.size());
  const int b_count = static_cast<int>(b.size());
  Eigen::VectorXd p_ab = Eigen::VectorXd::Zero(Eigen::Index{1} << ab_count);
  Eigen::VectorXd p_bc = Eigen::VectorXd::Zero(Eigen::Index{1} << bc_count);
  Eigen::VectorXd p_b = Eigen::VectorXd::Zero(Eigen::Index{1} << b_count);
  std::vector<std::uint32_t> ab_of(joint.size()), bc_of(joint.size()),
      b_of(joint.size());
  for (Eigen::Index v = 0; v < joint.size(); ++v) {
    std::uint32_t ab = 0;
    std::uint32_t bc = 0;
    std::uint32_t bb = 0;
    for (int pos = 0; pos < k; ++pos) {
      const std::uint32_t bit = (static_cast<std::uint64_t>(v) >>
                                 (k - 1 - pos)) &
                                1;
      if (cls[pos] != 2) {
        ab = (ab << 1) | bit;
      }
      if (cls[pos] != 0) {
        bc = (bc << 1) | bit;
      }
      if (cls[pos] == 1) {
        bb = (bb << 1) | bit;
      }
    }
    ab_of[v] = ab;
    bc_of[v] = bc;
    b_of[v] = bb;
    p_ab[ab] += joint[v];
    p_bc[bc] += joint[v];
    p_b[bb] += joint[v];
  }
  double gap = 0.0;
  for (Eigen::Index v = 0; v < joint.size(); ++v) {
    const double denom = p_b[b_of[v]];
    const double product =
        denom > 0.0 ? p_ab[ab_of[v]] * p_bc[bc_of[v]] / denom : 0.0;
    gap += std::abs(joint[v] - product);
  }
  return gap;
}

}  // namespace

double markov_gap(const State& state, const SublatticeGrid& grid, int block,
                  int ell) {
  const int n = state.qubit_count();
  if (n != grid.lattice().qubit_count()) {
    throw Error(ErrorKind::InvalidArgument,
                "state register does not match the grid lattice");
  }
  const std::vector<int> seed{block};
  const auto boundary_blocks = grid.boundary(seed, ell);
  std::vector<int> rest_blocks;
  for (int b = 0; b < grid.block_count(); ++b) {
    if (b != block &&
        !std::binary_search(boundary_blocks.begin(), boundary_blocks.end(),
                            b)) {
      rest_blocks.push_back(b);
    }
  }
  const auto a_qubits = grid.qubits_of(seed);
  const auto b_qubits = grid.qubits_of(boundary_blocks);
  const auto c_qubits = grid.qubits_of(rest_blocks);
  // Dephase first, then marginalize; for diagonal data the diagonal already
  // carries the dephased distribution.
  const Eigen::VectorXd full = diagonal_distribution(state);
  return distribution_markov_gap(full, n, a_qubits, b_qubits, c_qubits);
}

double markov_gap(const Circuit& circuit, const SublatticeGrid& grid, int block,
                  int ell) {
  return markov_gap(simulate(circuit), grid, block, ell);
}

BoundReport check_markov_chain_accumulation(const Circuit& circuit,
                                            const SublatticeGrid& grid,
                                            int ell) {
  return check_markov_chain_accumulation(circuit, simulate(circuit), grid,
                                         ell);
}

BoundReport check_markov_chain_accumulation(const Circuit& circuit,
                                            const State& state,
                                            const SublatticeGrid& grid,
                                            int ell) {
  const int n = state.qubit_count();
  const Eigen::VectorXd p_full = diagonal_distribution(state);
  long fallbacks = 0;
  const Eigen::VectorXd law = law_patching(circuit, grid, ell, &fallbacks);
  const double measured = (law - p_full).cwiseAbs().sum();
  // Telescoping bound: at step i the sampler replaces P_{J_i | J_<i} with
  // P_{J_i | boundary}, so TV accumulates one Markov gap per step with
  // A' = J_<i minus the boundary, B' = the boundary, C' = J_i.
  double total_gap = 0.0;
  const int m = grid.block_count();
  for (int b = 1; b < m; ++b) {
    const std::vector<int> seed{b};
    std::vector<int> boundary_blocks;
    for (int nb : grid.boundary(seed, ell)) {
      if (nb < b) {
        boundary_blocks.push_back(nb);
      }
    }
    std::vector<int> far_blocks;
    for (int prev = 0; prev < b; ++prev) {
      if (!std::binary_search(boundary_blocks.begin(), boundary_blocks.end(),
                              prev)) {
        far_blocks.push_back(prev);
      }
    }
    total_gap += distribution_markov_gap(
        p_full, n, grid.qubits_of(far_blocks), grid.qubits_of(boundary_blocks),
        grid.qubits_of(seed));
  }
  BoundReport report;
  report.name = "markov_chain_accumulation";
  report.measured = measured;
  report.bound = total_gap;
  report.add_param("ell", static_cast<long>(ell));
  report.add_param("blocks", static_cast<long>(m));
  report.add_param("fallback_events", fallbacks);
  report.finish();
  return report;
}

Observable Observable::make_pauli(PauliString p) {
  Observable obs;
  obs.kind = Kind::Pauli;
  obs.pauli = std::move(p);
  return obs;
}

Observable Observable::make_projector(std::vector<int> subset,
                                      std::uint64_t bits) {
  Observable obs;
  obs.kind = Kind::Projector;
  obs.subset = std::move(subset);
  if (!std::is_sorted(obs.subset.begin(), obs.subset.end()) ||
      std::adjacent_find(obs.subset.begin(), obs.subset.end()) !=
          obs.subset.end()) {
    throw Error(ErrorKind::InvalidArgument,
                "projector qubits must be strictly increasing");
  }
  obs.bits = bits;
  return obs;
}

std::vector<int> Observable::support() const {
  if (kind == Kind::Pauli) {
    return pauli.support_positions();
  }
  return subset;
}

std::string Observable::describe() const {
  if (kind == Kind::Pauli) {
    return "pauli:" + pauli.str();
  }
  std::ostringstream out;
  out << "projector:";
  for (std::size_t j = 0; j < subset.size(); ++j) {
    out << (j ? "," : "") << subset[j] << '='
        << ((bits >> (subset.size() - 1 - j)) & 1);
  }
  return out.str();
}

double observable_expectation(const State& state,
                              const Observable& observable) {
  if (observable.kind == Observable::Kind::Pauli) {
    const auto& p = observable.pauli;
    const int nq = state.qubit_count();
    std::uint64_t flip = 0;
    std::uint64_t y_mask = 0;
    std::uint64_t z_mask = 0;
    for (int pos : p.support_positions()) {
      const int local = state.position_of(pos);
      const std::uint64_t mask = std::uint64_t{1} << (nq - 1 - local);
      switch (p.code(pos)) {
        case 1:
          flip |= mask;
          break;
        case 2:
          flip |= mask;
          y_mask |= mask;
          break;
        case 3:
          z_mask |= mask;
          break;
        default:
          break;
      }
    }
    std::complex<double> y_phase = 1.0;
    const int y_count = std::popcount(y_mask);
    for (int i = 0; i < y_count % 4; ++i) {
      y_phase *= std::complex<double>(0.0, 1.0);
    }
    std::complex<double> total = 0.0;
    const std::uint64_t dim = std::uint64_t{1} << nq;
    for (std::uint64_t r = 0; r < dim; ++r) {
      const double sign =
          (std::popcount(r & (y_mask | z_mask)) % 2 == 0) ? 1.0 : -1.0;
      total += state.matrix()(r, r ^ flip) * sign * y_phase;
    }
    return total.real();
  }
  const Distribution marg = marginal_distribution(state, observable.subset);
  return marg.probs()[static_cast<Eigen::Index>(observable.bits)];
}

BoundReport check_observable_decay(const Circuit& circuit,
                                   const Observable& observable) {
  return check_observable_decay(circuit, simulate(circuit), observable);
}

BoundReport check_observable_decay(const Circuit& circuit, const State& state,
                                   const Observable& observable) {
  if (circuit.depth() < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "observable decay needs at least one noisy layer");
  }
  const auto supp = observable.support();
  const double p = circuit.noise();
  const double base =
      observable.kind == Observable::Kind::Pauli ? 1.0 - p : 1.0 - p / 2.0;
  BoundReport report;
  report.name = "observable_decay";
  report.measured = std::abs(observable_expectation(state, observable));
  report.bound = ipow(base, static_cast<int>(supp.size()));
  report.add_param("observable", observable.describe());
  report.add_param("support_size", static_cast<long>(supp.size()));
  report.add_param("p", p);
  report.add_param("base", base);
  report.finish();
  return report;
}

Estimate estimate_observable(const Circuit& circuit,
                             const Observable& observable,
                             EstimateMethod method, long budget,
                             std::uint64_t seed) {
  Estimate estimate;
  if (method == EstimateMethod::Lightcone) {
    const auto supp = observable.support();
    if (supp.empty()) {
      estimate.value = 1.0;  // identity observable
      return estimate;
    }
    const State reduced = simulate_lightcone(circuit, supp);
    estimate.value = observable_expectation(reduced, observable);
    return estimate;
  }
  if (budget < 1) {
    throw Error(ErrorKind::InvalidArgument, "trajectory budget must be >= 1");
  }
  const int n = circuit.qubit_count();
  check_statevector_guard(n, "estimate_observable");
  std::vector<int> codes(n, 0);
  if (observable.kind == Observable::Kind::Pauli) {
    for (int pos = 0; pos < n; ++pos) {
      codes[pos] = observable.pauli.code(pos);
    }
  }
  Rng rng(seed);
  const double p = circuit.noise();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long shot = 0; shot < budget; ++shot) {
    Statevector psi(n);
    for (const auto& layer : circuit.layers()) {
      for (const Gate& gate : layer) {
        psi.apply_gate(gate);
      }
      for (int q = 0; q < n; ++q) {
        const double u = rng.uniform();
        if (p > 0.0 && u < 0.75 * p) {
          psi.apply_pauli(q, 1 + static_cast<int>(u / (0.25 * p)));
        }
      }
    }
    const double value =
        observable.kind == Observable::Kind::Pauli
            ? psi.pauli_expectation(codes)
            : psi.projector_expectation(observable.subset, observable.bits);
    sum += value;
    sum_sq += value * value;
  }
  estimate.budget = budget;
  estimate.value = sum / static_cast<double>(budget);
  if (budget > 1) {
    const double variance =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(budget)) /
                          static_cast<double>(budget - 1));
    estimate.stderr_value =
        std::sqrt(variance / static_cast<double>(budget));
  }
  return estimate;
}

}  // namespace nlqs
