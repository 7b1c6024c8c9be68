// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circuit.hpp"

namespace nlqs {

inline constexpr const char* kSchemaVersion = "nlqs/1";
inline constexpr const char* kArtifactVersion = "0.1.0";

struct VerifyConfig {
  std::string family = "1d-haar";
  int n = 8;
  std::vector<int> depths = {1, 2, 3, 4};
  std::vector<double> ps = {0.1, 0.3, 0.5};
  int seeds = 10;
  std::uint64_t seed0 = 0;
  int width = 0;  // sublattice width; 0 = default 2d (at least 1)
  std::vector<int> ells = {1, 2};
};

struct VerifyResult {
  std::string records;  // line-delimited JSON, one object per check
  long checks = 0;
  long failures = 0;    // applicable checks that failed
};

VerifyResult run_verify(const VerifyConfig& config);

Circuit family_circuit(const std::string& family, int n, int depth, double p,
                       std::uint64_t seed);

std::string simulate_summary_records(const Circuit& circuit, int top_count);
std::string decompose_records(const Circuit& circuit, int width);
std::string markov_gap_records(const Circuit& circuit, int width, int ell_max);
std::string critical_depth_record(double p, int dimension, double c,
                                  int* out_depth = nullptr);

struct SampleRequest {
  std::string method;  // uniform | exact | trajectory | sparse | patching
  int k = 1;
  int ell = 1;
  int width = 0;  // 0 = default 2d (at least 1)
  std::uint64_t seed = 0;
  long count = 0;
};

struct SampleOutput {
  std::string bits_text;  // one bitstring per line
  std::string meta_json;  // single sidecar metadata object
};

SampleOutput run_sample(const Circuit& circuit, const SampleRequest& request);

int effective_width(int requested, int depth);

}  // namespace nlqs
