// SPDX-License-Identifier: Apache-2.0
#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "analysis.hpp"
#include "common.hpp"
#include "dense.hpp"
#include "pauli.hpp"
#include "rng.hpp"
#include "samplers.hpp"

namespace nlqs {

namespace {

using Json = nlohmann::ordered_json;

Json circuit_provenance(const Circuit& circuit) {
  Json j;
  j["hash"] = circuit.hash();
  j["n"] = circuit.qubit_count();
  j["d"] = circuit.depth();
  j["p"] = circuit.noise();
  j["dims"] = circuit.lattice().dims();
  if (circuit.origin().random) {
    j["seed"] = circuit.origin().seed;
    j["generator"] = circuit.origin().generator;
    j["gateset"] = circuit.origin().gateset;
  }
  return j;
}

Json report_record(const BoundReport& report, const Circuit& circuit) {
  Json j;
  j["record"] = "bound_report";
  j["schema"] = kSchemaVersion;
  j["name"] = report.name;
  j["measured"] = report.measured;
  j["bound"] = report.bound;
  j["slack"] = report.slack;
  j["pass"] = report.pass;
  j["applicable"] = report.applicable;
  Json params = Json::object();
  for (const auto& [key, value] : report.params) {
    params[key] = value;
  }
  j["params"] = std::move(params);
  j["circuit"] = circuit_provenance(circuit);
  return j;
}

void emit(std::ostringstream& out, const Json& record) {
  out << record.dump() << '\n';
}

}  // namespace

int effective_width(int requested, int depth) {
  if (requested > 0) {
    return requested;
  }
  return std::max(1, 2 * depth);
}

Circuit family_circuit(const std::string& family, int n, int depth, double p,
                       std::uint64_t seed) {
  if (family == "1d-haar" || family == "1d-named") {
    const GateSet set =
        family == "1d-haar" ? GateSet::Haar : GateSet::Named;
    return random_local_circuit(Lattice({n}), depth, p, seed, set);
  }
  if (family == "2d-haar") {
    const int side = static_cast<int>(std::lround(std::sqrt(n)));
    if (side * side != n) {
      throw Error(ErrorKind::InvalidArgument,
                  "2d-haar family needs a square qubit count");
    }
    return random_local_circuit(Lattice({side, side}), depth, p, seed,
                                GateSet::Haar);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown circuit family: " + family);
}

namespace {

std::vector<Observable> decay_observables(int n) {
  std::vector<Observable> out;
  // All Pauli strings of weight 1 and 2.
  for (int q = 0; q < n; ++q) {
    for (int code = 1; code <= 3; ++code) {
      out.push_back(
          Observable::make_pauli(PauliString::identity(n).with(q, code)));
    }
  }
  for (int q1 = 0; q1 < n; ++q1) {
    for (int q2 = q1 + 1; q2 < n; ++q2) {
      for (int c1 = 1; c1 <= 3; ++c1) {
        for (int c2 = 1; c2 <= 3; ++c2) {
          out.push_back(Observable::make_pauli(
              PauliString::identity(n).with(q1, c1).with(q2, c2)));
        }
      }
    }
  }
  // All bitstring projectors on one and two qubits.
  for (int q = 0; q < n; ++q) {
    for (std::uint64_t bits = 0; bits < 2; ++bits) {
      out.push_back(Observable::make_projector({q}, bits));
    }
  }
  for (int q1 = 0; q1 < n; ++q1) {
    for (int q2 = q1 + 1; q2 < n; ++q2) {
      for (std::uint64_t bits = 0; bits < 4; ++bits) {
        out.push_back(Observable::make_projector({q1, q2}, bits));
      }
    }
  }
  return out;
}

}  // namespace

VerifyResult run_verify(const VerifyConfig& config) {
  std::ostringstream out;
  VerifyResult result;
  auto record_report = [&](const BoundReport& report, const Circuit& circuit,
                   std::uint64_t seed) {
    Json record = report_record(report, circuit);
    record["seed"] = seed;
    record["generator"] = Rng::kName;
    emit(out, record);
    ++result.checks;
    if (report.applicable && !report.pass) {
      ++result.failures;
    }
  };

  for (int depth : config.depths) {
    for (double p : config.ps) {
      for (int s = 0; s < config.seeds; ++s) {
        const std::uint64_t seed = config.seed0 + static_cast<std::uint64_t>(s);
        const Circuit circuit =
            family_circuit(config.family, config.n, depth, p, seed);
        const SublatticeGrid grid(circuit.lattice(),
                                  effective_width(config.width, depth));
        const State state = simulate(circuit);
        const int n = circuit.qubit_count();
        const int m = grid.block_count();

        for (int q = 0; q < n; ++q) {
          const std::vector<int> region{q};
          record_report(check_decay_bound(circuit, state, region), circuit, seed);
        }
        for (const BoundReport& report :
             check_sublattice_decay(circuit, state, grid)) {
          record_report(report, circuit, seed);
        }
        for (int b = 0; b < m; ++b) {
          record_report(check_entropy_production(state, grid.block(b),
                                         circuit.noise()),
                circuit, seed);
        }
        if (m >= 2) {
          std::vector<int> bigger = grid.block(0);
          const auto& second = grid.block(1);
          bigger.insert(bigger.end(), second.begin(), second.end());
          record_report(check_subset_monotonicity(state, grid.block(0), bigger),
                circuit, seed);
        }
        const int max_a = std::min(3, m);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
          if (std::popcount(mask) > max_a) {
            continue;
          }
          std::vector<int> blocks;
          for (int b = 0; b < m; ++b) {
            if ((mask >> b) & 1) {
              blocks.push_back(b);
            }
          }
          record_report(check_ie_norm_bound(circuit, state, grid, blocks), circuit,
                seed);
        }
        for (const BoundReport& report :
             truncation_error_sweep(circuit, state, grid)) {
          record_report(report, circuit, seed);
        }
        for (int ell : config.ells) {
          for (int b = 0; b < m; ++b) {
            Json record;
            record["record"] = "markov_gap";
            record["schema"] = kSchemaVersion;
            record["block"] = b;
            record["ell"] = ell;
            record["gap"] = markov_gap(state, grid, b, ell);
            record["circuit"] = circuit_provenance(circuit);
            record["seed"] = seed;
            record["generator"] = Rng::kName;
            emit(out, record);
          }
          record_report(check_markov_chain_accumulation(circuit, state, grid, ell),
                circuit, seed);
        }
        if (depth >= 1) {
          for (const Observable& obs : decay_observables(n)) {
            record_report(check_observable_decay(circuit, state, obs), circuit, seed);
          }
        }
      }
    }
  }
  Json summary;
  summary["record"] = "verify_summary";
  summary["schema"] = kSchemaVersion;
  summary["family"] = config.family;
  summary["n"] = config.n;
  summary["depths"] = config.depths;
  summary["ps"] = config.ps;
  summary["seeds"] = config.seeds;
  summary["seed0"] = config.seed0;
  summary["width"] = config.width;
  summary["checks"] = result.checks;
  summary["failures"] = result.failures;
  summary["version"] = kArtifactVersion;
  emit(out, summary);
  result.records = out.str();
  return result;
}

std::string simulate_summary_records(const Circuit& circuit, int top_count) {
  const State state = simulate(circuit);
  const Eigen::VectorXd diag = diagonal_distribution(state);
  std::vector<Eigen::Index> order(diag.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return diag[a] > diag[b];
                   });
  double shannon = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag[i] > 0.0) {
      shannon -= diag[i] * std::log2(diag[i]);
    }
  }
  Json record;
  record["record"] = "simulate_summary";
  record["schema"] = kSchemaVersion;
  record["entropy_bits"] = von_neumann_entropy(state);
  record["dephased_entropy_bits"] = shannon;
  Json top = Json::array();
  const int n = circuit.qubit_count();
  const int limit =
      std::min<Eigen::Index>(top_count, diag.size());
  for (int i = 0; i < limit; ++i) {
    Json entry;
    entry["bits"] =
        bits_to_string(static_cast<std::uint64_t>(order[i]), n);
    entry["prob"] = diag[order[i]];
    top.push_back(std::move(entry));
  }
  record["top_outcomes"] = std::move(top);
  record["circuit"] = circuit_provenance(circuit);
  record["version"] = kArtifactVersion;
  return record.dump() + "\n";
}

std::string decompose_records(const Circuit& circuit, int width) {
  const SublatticeGrid grid(circuit.lattice(),
                            effective_width(width, circuit.depth()));
  const State state = simulate(circuit);
  const PauliDecomposition dec = pauli_decompose(state);
  const int m = grid.block_count();
  struct ClassStat {
    long count = 0;
    double abs_mass = 0.0;
    double sq_mass = 0.0;
  };
  std::vector<ClassStat> by_size(m + 1);
  std::vector<ClassStat> by_component(m + 1);
  for (const auto& [word, coeff] : dec.coefficients()) {
    const SupportProfile profile =
        support_profile(PauliString(dec.qubit_count(), word), grid);
    auto& s = by_size[profile.block_count];
    auto& c = by_component[profile.max_component];
    ++s.count;
    s.abs_mass += std::abs(coeff);
    s.sq_mass += coeff * coeff;
    ++c.count;
    c.abs_mass += std::abs(coeff);
    c.sq_mass += coeff * coeff;
  }
  std::ostringstream out;
  const Json provenance = circuit_provenance(circuit);
  for (int s = 0; s <= m; ++s) {
    Json record;
    record["record"] = "pauli_mass_by_support_size";
    record["schema"] = kSchemaVersion;
    record["width"] = grid.width();
    record["support_size"] = s;
    record["terms"] = by_size[s].count;
    record["abs_coeff_mass"] = by_size[s].abs_mass;
    record["sq_coeff_mass"] = by_size[s].sq_mass;
    record["circuit"] = provenance;
    emit(out, record);
  }
  for (int c = 0; c <= m; ++c) {
    Json record;
    record["record"] = "pauli_mass_by_max_component";
    record["schema"] = kSchemaVersion;
    record["width"] = grid.width();
    record["max_component"] = c;
    record["terms"] = by_component[c].count;
    record["abs_coeff_mass"] = by_component[c].abs_mass;
    record["sq_coeff_mass"] = by_component[c].sq_mass;
    record["circuit"] = provenance;
    emit(out, record);
  }
  return out.str();
}

std::string markov_gap_records(const Circuit& circuit, int width,
                               int ell_max) {
  const SublatticeGrid grid(circuit.lattice(),
                            effective_width(width, circuit.depth()));
  const State state = simulate(circuit);
  std::ostringstream out;
  const Json provenance = circuit_provenance(circuit);
  const int limit = ell_max >= 0 ? ell_max : grid.block_count();
  for (int ell = 0; ell <= limit; ++ell) {
    for (int b = 0; b < grid.block_count(); ++b) {
      Json record;
      record["record"] = "markov_gap";
      record["schema"] = kSchemaVersion;
      record["width"] = grid.width();
      record["block"] = b;
      record["ell"] = ell;
      record["gap"] = markov_gap(state, grid, b, ell);
      record["circuit"] = provenance;
      emit(out, record);
    }
  }
  return out.str();
}

std::string critical_depth_record(double p, int dimension, double c,
                                  int* out_depth) {
  const int d_star = critical_depth(p, dimension, c);
  if (out_depth != nullptr) {
    *out_depth = d_star;
  }
  Json record;
  record["record"] = "critical_depth";
  record["schema"] = kSchemaVersion;
  record["p"] = p;
  record["dimension"] = dimension;
  record["c"] = c;
  record["d_star"] = d_star;
  record["version"] = kArtifactVersion;
  return record.dump() + "\n";
}

SampleOutput run_sample(const Circuit& circuit, const SampleRequest& request) {
  SampleBatch batch;
  const int depth = circuit.depth();
  if (request.method == "uniform") {
    batch = sample_uniform(circuit.qubit_count(), request.seed, request.count);
  } else if (request.method == "exact") {
    batch = sample_exact(circuit, request.seed, request.count);
  } else if (request.method == "trajectory") {
    batch = sample_trajectory(circuit, request.seed, request.count);
  } else if (request.method == "sparse") {
    const SublatticeGrid grid(circuit.lattice(),
                              effective_width(request.width, depth));
    batch = sample_sparse(circuit, grid, request.k, request.seed,
                          request.count);
  } else if (request.method == "patching") {
    const SublatticeGrid grid(circuit.lattice(),
                              effective_width(request.width, depth));
    batch = sample_patching(circuit, grid, request.ell, request.seed,
                            request.count);
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown sampling method: " + request.method);
  }
  SampleOutput output;
  std::ostringstream bits;
  for (const std::string& line : batch.bitstrings) {
    bits << line << '\n';
  }
  output.bits_text = bits.str();

  Json meta;
  meta["record"] = "sample_batch";
  meta["schema"] = kSchemaVersion;
  meta["method"] = batch.method;
  meta["seed"] = batch.seed;
  meta["generator"] = batch.generator;
  meta["count"] = static_cast<long>(batch.bitstrings.size());
  meta["n"] = batch.n;
  if (request.method == "sparse") {
    meta["k"] = request.k;
    meta["width"] = effective_width(request.width, depth);
  }
  if (request.method == "patching") {
    meta["ell"] = request.ell;
    meta["width"] = effective_width(request.width, depth);
  }
  Json diagnostics;
  diagnostics["clamped_mass"] = batch.clamped_mass;
  diagnostics["clamp_events"] = batch.clamp_events;
  diagnostics["fallback_events"] = batch.fallback_events;
  meta["diagnostics"] = std::move(diagnostics);
  meta["circuit"] = circuit_provenance(circuit);
  meta["version"] = kArtifactVersion;
  const auto now = std::chrono::system_clock::now();
  meta["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          now.time_since_epoch())
          .count();
  output.meta_json = meta.dump() + "\n";
  return output;
}

}  // namespace nlqs
