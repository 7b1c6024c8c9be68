// SPDX-License-Identifier: Apache-2.0
#include "nlqs.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "circuit.hpp"
#include "common.hpp"
#include "driver.hpp"

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out != nullptr) {
    std::memcpy(out, text.c_str(), text.size() + 1);
  }
  return out;
}

nlqs_status status_of(nlqs::ErrorKind kind) {
  using nlqs::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return NLQS_ERR_INVALID_ARGUMENT;
    case ErrorKind::Parse:
      return NLQS_ERR_PARSE;
    case ErrorKind::Locality:
      return NLQS_ERR_LOCALITY;
    case ErrorKind::Unitarity:
      return NLQS_ERR_UNITARITY;
    case ErrorKind::Guard:
      return NLQS_ERR_GUARD;
    case ErrorKind::Numeric:
      return NLQS_ERR_NUMERIC;
    case ErrorKind::Conditioning:
      return NLQS_ERR_CONDITIONING;
    case ErrorKind::Io:
      return NLQS_ERR_IO;
  }
  return NLQS_ERR_INTERNAL;
}

template <typename Fn>
nlqs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NLQS_OK;
  } catch (const nlqs::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NLQS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NLQS_ERR_INTERNAL;
  }
}

nlqs_status require(bool condition, const char* message) {
  if (condition) {
    return NLQS_OK;
  }
  g_last_error = message;
  return NLQS_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct nlqs_circuit {
  nlqs::Circuit circuit;
};

extern "C" {

const char* nlqs_version(void) { return nlqs::kArtifactVersion; }

const char* nlqs_status_name(nlqs_status status) {
  switch (status) {
    case NLQS_OK:
      return "ok";
    case NLQS_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case NLQS_ERR_PARSE:
      return "parse_error";
    case NLQS_ERR_LOCALITY:
      return "locality_violation";
    case NLQS_ERR_UNITARITY:
      return "unitarity_violation";
    case NLQS_ERR_GUARD:
      return "guard_exceeded";
    case NLQS_ERR_NUMERIC:
      return "numeric_error";
    case NLQS_ERR_CONDITIONING:
      return "conditioning_error";
    case NLQS_ERR_IO:
      return "io_error";
    case NLQS_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

const char* nlqs_last_error(void) { return g_last_error.c_str(); }

void nlqs_string_free(char* text) { std::free(text); }

void nlqs_set_guards(int max_dense_qubits, int max_statevector_qubits) {
  if (max_dense_qubits >= 1) {
    nlqs::guards().max_dense_qubits = max_dense_qubits;
  }
  if (max_statevector_qubits >= 1) {
    nlqs::guards().max_statevector_qubits = max_statevector_qubits;
  }
}

void nlqs_get_guards(int* max_dense_qubits, int* max_statevector_qubits) {
  if (max_dense_qubits != nullptr) {
    *max_dense_qubits = nlqs::guards().max_dense_qubits;
  }
  if (max_statevector_qubits != nullptr) {
    *max_statevector_qubits = nlqs::guards().max_statevector_qubits;
  }
}

nlqs_status nlqs_circuit_parse(const char* text, nlqs_circuit** out) {
  if (auto bad = require(text != nullptr && out != nullptr,
                         "text and out must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out = new nlqs_circuit{nlqs::parse_circuit(text)};
  });
}

nlqs_status nlqs_circuit_load(const char* path, nlqs_circuit** out) {
  if (auto bad = require(path != nullptr && out != nullptr,
                         "path and out must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out = new nlqs_circuit{nlqs::load_circuit(path)};
  });
}

nlqs_status nlqs_circuit_random(const int32_t* dims, int32_t ndims,
                                int32_t depth, double p, uint64_t seed,
                                const char* gateset, nlqs_circuit** out) {
  if (auto bad = require(dims != nullptr && ndims >= 1 && out != nullptr,
                         "dims must be non-empty and out non-null")) {
    return bad;
  }
  return guarded([&] {
    std::vector<int> sides(dims, dims + ndims);
    nlqs::GateSet set = nlqs::GateSet::Haar;
    if (gateset != nullptr && std::strcmp(gateset, "named") == 0) {
      set = nlqs::GateSet::Named;
    } else if (gateset != nullptr && std::strcmp(gateset, "haar") != 0 &&
               *gateset != '\0') {
      throw nlqs::Error(nlqs::ErrorKind::InvalidArgument,
                        "gateset must be 'haar' or 'named'");
    }
    *out = new nlqs_circuit{nlqs::random_local_circuit(
        nlqs::Lattice(std::move(sides)), depth, p, seed, set)};
  });
}

void nlqs_circuit_free(nlqs_circuit* circuit) { delete circuit; }

int32_t nlqs_circuit_qubits(const nlqs_circuit* circuit) {
  return circuit == nullptr ? -1 : circuit->circuit.qubit_count();
}

int32_t nlqs_circuit_depth(const nlqs_circuit* circuit) {
  return circuit == nullptr ? -1 : circuit->circuit.depth();
}

double nlqs_circuit_noise(const nlqs_circuit* circuit) {
  return circuit == nullptr ? -1.0 : circuit->circuit.noise();
}

nlqs_status nlqs_circuit_serialize(const nlqs_circuit* circuit,
                                   char** out_text) {
  if (auto bad = require(circuit != nullptr && out_text != nullptr,
                         "circuit and out_text must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out_text = copy_string(nlqs::serialize_circuit(circuit->circuit));
  });
}

nlqs_status nlqs_circuit_hash(const nlqs_circuit* circuit, char** out_hash) {
  if (auto bad = require(circuit != nullptr && out_hash != nullptr,
                         "circuit and out_hash must be non-null")) {
    return bad;
  }
  return guarded([&] { *out_hash = copy_string(circuit->circuit.hash()); });
}

nlqs_status nlqs_simulate_summary(const nlqs_circuit* circuit,
                                  int32_t top_count, char** out_records) {
  if (auto bad = require(circuit != nullptr && out_records != nullptr,
                         "circuit and out_records must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out_records = copy_string(
        nlqs::simulate_summary_records(circuit->circuit, top_count));
  });
}

nlqs_status nlqs_sample(const nlqs_circuit* circuit,
                        const nlqs_sample_request* request, char** out_bits,
                        char** out_meta) {
  if (auto bad = require(circuit != nullptr && request != nullptr &&
                             request->method != nullptr &&
                             out_bits != nullptr && out_meta != nullptr,
                         "circuit, request and outputs must be non-null")) {
    return bad;
  }
  return guarded([&] {
    nlqs::SampleRequest req;
    req.method = request->method;
    req.k = request->k;
    req.ell = request->ell;
    req.width = request->width;
    req.seed = request->seed;
    req.count = static_cast<long>(request->count);
    const nlqs::SampleOutput output =
        nlqs::run_sample(circuit->circuit, req);
    *out_bits = copy_string(output.bits_text);
    *out_meta = copy_string(output.meta_json);
  });
}

nlqs_status nlqs_decompose_stats(const nlqs_circuit* circuit, int32_t width,
                                 char** out_records) {
  if (auto bad = require(circuit != nullptr && out_records != nullptr,
                         "circuit and out_records must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out_records =
        copy_string(nlqs::decompose_records(circuit->circuit, width));
  });
}

nlqs_status nlqs_markov_gap_sweep(const nlqs_circuit* circuit, int32_t width,
                                  int32_t ell_max, char** out_records) {
  if (auto bad = require(circuit != nullptr && out_records != nullptr,
                         "circuit and out_records must be non-null")) {
    return bad;
  }
  return guarded([&] {
    *out_records = copy_string(
        nlqs::markov_gap_records(circuit->circuit, width, ell_max));
  });
}

nlqs_status nlqs_critical_depth(double p, int32_t dimension, double c,
                                int32_t* out_depth, char** out_record) {
  if (auto bad = require(out_depth != nullptr, "out_depth must be non-null")) {
    return bad;
  }
  return guarded([&] {
    int depth = 0;
    const std::string record =
        nlqs::critical_depth_record(p, dimension, c, &depth);
    *out_depth = depth;
    if (out_record != nullptr) {
      *out_record = copy_string(record);
    }
  });
}

nlqs_status nlqs_verify(const nlqs_verify_request* request, char** out_records,
                        int64_t* out_checks, int64_t* out_failures) {
  if (auto bad = require(request != nullptr && request->family != nullptr &&
                             out_records != nullptr,
                         "request, family and out_records must be non-null")) {
    return bad;
  }
  return guarded([&] {
    nlqs::VerifyConfig config;
    config.family = request->family;
    config.n = request->n;
    if (request->depths != nullptr && request->depth_count > 0) {
      config.depths.assign(request->depths,
                           request->depths + request->depth_count);
    }
    if (request->ps != nullptr && request->p_count > 0) {
      config.ps.assign(request->ps, request->ps + request->p_count);
    }
    if (request->seeds > 0) {
      config.seeds = request->seeds;
    }
    config.seed0 = request->seed0;
    config.width = request->width;
    const nlqs::VerifyResult result = nlqs::run_verify(config);
    *out_records = copy_string(result.records);
    if (out_checks != nullptr) {
      *out_checks = result.checks;
    }
    if (out_failures != nullptr) {
      *out_failures = result.failures;
    }
  });
}

}  // extern "C"
