// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver. Talks to the toolkit exclusively through the C API in
// nlqs.h; all numerics live behind the shared library.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlqs.h"

namespace {

struct StringDeleter {
  void operator()(char* text) const { nlqs_string_free(text); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct CircuitDeleter {
  void operator()(nlqs_circuit* circuit) const { nlqs_circuit_free(circuit); }
};
using CircuitPtr = std::unique_ptr<nlqs_circuit, CircuitDeleter>;

[[noreturn]] void fail(nlqs_status status) {
  std::cerr << "error (" << nlqs_status_name(status)
            << "): " << nlqs_last_error() << "\n";
  std::exit(1);
}

void check(nlqs_status status) {
  if (status != NLQS_OK) {
    fail(status);
  }
}

struct CircuitOptions {
  std::string path;
  std::vector<int> dims;
  int depth = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string gateset = "haar";

  void attach(CLI::App* cmd) {
    cmd->add_option("--circuit", path, "circuit file to load");
    cmd->add_option("--dims", dims,
                    "lattice side lengths for a random circuit");
    cmd->add_option("--depth", depth, "random circuit depth");
    cmd->add_option("--p", p, "depolarizing noise strength");
    cmd->add_option("--circuit-seed", seed, "random circuit seed");
    cmd->add_option("--gateset", gateset, "haar or named");
  }

  CircuitPtr build() const {
    if (path.empty() == dims.empty()) {
      std::cerr << "error: provide exactly one circuit source "
                   "(--circuit or --dims)\n";
      std::exit(1);
    }
    nlqs_circuit* raw = nullptr;
    if (!path.empty()) {
      check(nlqs_circuit_load(path.c_str(), &raw));
    } else {
      std::vector<int32_t> sides(dims.begin(), dims.end());
      check(nlqs_circuit_random(sides.data(),
                                static_cast<int32_t>(sides.size()), depth, p,
                                seed, gateset.c_str(), &raw));
    }
    return CircuitPtr(raw);
  }
};

void write_output(const std::string& path, const char* text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(1);
  }
  out << text;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto range_at = text.find("..");
  if (range_at != std::string::npos) {
    const int lo = std::stoi(text.substr(0, range_at));
    const int hi = std::stoi(text.substr(range_at + 2));
    for (int v = lo; v <= hi; ++v) {
      out.push_back(v);
    }
    return out;
  }
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) {
      out.push_back(std::stoi(item));
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) {
      out.push_back(std::stod(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for noisy geometrically local quantum "
               "circuits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nlqs_version()));

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "dense simulation summary: entropies, top outcomes");
  CircuitOptions sim_circuit;
  sim_circuit.attach(simulate);
  int top_count = 8;
  std::string sim_out;
  simulate->add_option("--top", top_count, "number of top outcomes to report");
  simulate->add_option("--out", sim_out, "output file (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "draw bitstring samples");
  CircuitOptions sample_circuit;
  sample_circuit.attach(sample);
  std::string method = "exact";
  std::int64_t count = 0;
  std::uint64_t sample_seed = 0;
  int k = 1;
  int ell = 1;
  int width = 0;
  std::string sample_out;
  sample->add_option("--method", method,
                     "uniform | exact | trajectory | sparse | patching");
  sample->add_option("--count", count, "number of samples");
  sample->add_option("--seed", sample_seed, "sampler seed (default 0)");
  sample->add_option("--k", k, "sparse truncation order");
  sample->add_option("--l", ell, "patching conditioning distance");
  sample->add_option("--width", width, "sublattice width (0 = 2d)");
  sample->add_option("--out", sample_out,
                     "bitstring file; metadata goes to <out>.meta.json");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run the full analysis suite over a seeded circuit family");
  std::string family = "1d-haar";
  int verify_n = 8;
  std::string depths_text = "1..4";
  std::string ps_text = "0.1,0.3,0.5";
  int seeds = 10;
  std::uint64_t seed0 = 0;
  int verify_width = 2;
  std::string verify_out;
  verify->add_option("--family", family, "1d-haar | 1d-named | 2d-haar");
  verify->add_option("--n", verify_n, "qubit count");
  verify->add_option("--depths", depths_text, "e.g. 1..4 or 1,2,4");
  verify->add_option("--ps", ps_text, "e.g. 0.1,0.3,0.5");
  verify->add_option("--seeds", seeds, "seeds per (depth, p) grid point");
  verify->add_option("--seed0", seed0, "first seed");
  verify->add_option("--width", verify_width, "sublattice width (0 = 2d)");
  verify->add_option("--out", verify_out, "output file (default stdout)");

  // decompose
  auto* decompose = app.add_subcommand(
      "decompose", "Pauli coefficient mass by support size and component");
  CircuitOptions dec_circuit;
  dec_circuit.attach(decompose);
  int dec_width = 0;
  std::string dec_out;
  decompose->add_option("--width", dec_width, "sublattice width (0 = 2d)");
  decompose->add_option("--out", dec_out, "output file (default stdout)");

  // markov-gap
  auto* markov = app.add_subcommand("markov-gap",
                                    "Markov gap sweep over blocks and ell");
  CircuitOptions markov_circuit;
  markov_circuit.attach(markov);
  int markov_width = 0;
  int ell_max = -1;
  std::string markov_out;
  markov->add_option("--width", markov_width, "sublattice width (0 = 2d)");
  markov->add_option("--lmax", ell_max,
                     "largest ell (default: block count)");
  markov->add_option("--out", markov_out, "output file (default stdout)");

  // critical-depth
  auto* critical = app.add_subcommand("critical-depth",
                                      "critical depth d* for (p, D, c)");
  double cd_p = 0.5;
  int cd_dim = 1;
  double cd_c = 1.0;
  std::string cd_out;
  critical->add_option("--p", cd_p, "noise strength in (0,1)")->required();
  critical->add_option("--D", cd_dim, "lattice dimension");
  critical->add_option("--c", cd_c, "threshold factor (>= 1)");
  critical->add_option("--out", cd_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    const CircuitPtr circuit = sim_circuit.build();
    char* records = nullptr;
    check(nlqs_simulate_summary(circuit.get(), top_count, &records));
    CString holder(records);
    write_output(sim_out, records);
    return 0;
  }

  if (sample->parsed()) {
    const CircuitPtr circuit = sample_circuit.build();
    nlqs_sample_request request{};
    request.method = method.c_str();
    request.k = k;
    request.ell = ell;
    request.width = width;
    request.seed = sample_seed;
    request.count = count;
    char* bits = nullptr;
    char* meta = nullptr;
    check(nlqs_sample(circuit.get(), &request, &bits, &meta));
    CString bits_holder(bits);
    CString meta_holder(meta);
    if (sample_out.empty()) {
      std::cout << bits;
      std::cerr << meta;
    } else {
      write_output(sample_out, bits);
      write_output(sample_out + ".meta.json", meta);
    }
    return 0;
  }

  if (verify->parsed()) {
    const std::vector<int> depths = parse_int_list(depths_text);
    const std::vector<double> ps = parse_double_list(ps_text);
    std::vector<int32_t> depths32(depths.begin(), depths.end());
    nlqs_verify_request request{};
    request.family = family.c_str();
    request.n = verify_n;
    request.depths = depths32.data();
    request.depth_count = static_cast<int32_t>(depths32.size());
    request.ps = ps.data();
    request.p_count = static_cast<int32_t>(ps.size());
    request.seeds = seeds;
    request.seed0 = seed0;
    request.width = verify_width;
    char* records = nullptr;
    std::int64_t checks = 0;
    std::int64_t failures = 0;
    check(nlqs_verify(&request, &records, &checks, &failures));
    CString holder(records);
    write_output(verify_out, records);
    std::cerr << "verify: " << checks << " checks, " << failures
              << " failures\n";
    return failures == 0 ? 0 : 1;
  }

  if (decompose->parsed()) {
    const CircuitPtr circuit = dec_circuit.build();
    char* records = nullptr;
    check(nlqs_decompose_stats(circuit.get(), dec_width, &records));
    CString holder(records);
    write_output(dec_out, records);
    return 0;
  }

  if (markov->parsed()) {
    const CircuitPtr circuit = markov_circuit.build();
    char* records = nullptr;
    check(nlqs_markov_gap_sweep(circuit.get(), markov_width, ell_max,
                                &records));
    CString holder(records);
    write_output(markov_out, records);
    return 0;
  }

  if (critical->parsed()) {
    std::int32_t d_star = 0;
    char* record = nullptr;
    check(nlqs_critical_depth(cd_p, cd_dim, cd_c, &d_star, &record));
    CString holder(record);
    write_output(cd_out, record);
    return 0;
  }

  return 0;
}
