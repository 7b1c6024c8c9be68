// SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include <cstdlib>

namespace nlqs {

namespace {

int env_int(const char* name, int fallback) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') {
    return fallback;
  }
  char* end = nullptr;
  long parsed = std::strtol(value, &end, 10);
  if (end == value || parsed < 1 || parsed > 30) {
    return fallback;
  }
  return static_cast<int>(parsed);
}

Guards initial_guards() {
  Guards g;
  g.max_dense_qubits = env_int("NLQS_MAX_DENSE_QUBITS", g.max_dense_qubits);
  g.max_statevector_qubits =
      env_int("NLQS_MAX_STATEVECTOR_QUBITS", g.max_statevector_qubits);
  return g;
}

}  // namespace

Guards& guards() {
  static Guards instance = initial_guards();
  return instance;
}

void check_dense_guard(int qubits, const std::string& what) {
  if (qubits > guards().max_dense_qubits) {
    throw Error(ErrorKind::Guard,
                what + " needs a " + std::to_string(qubits) +
                    "-qubit density matrix; guard is " +
                    std::to_string(guards().max_dense_qubits) +
                    " (override with NLQS_MAX_DENSE_QUBITS)");
  }
}

void check_statevector_guard(int qubits, const std::string& what) {
  if (qubits > guards().max_statevector_qubits) {
    throw Error(ErrorKind::Guard,
                what + " needs a " + std::to_string(qubits) +
                    "-qubit statevector; guard is " +
                    std::to_string(guards().max_statevector_qubits) +
                    " (override with NLQS_MAX_STATEVECTOR_QUBITS)");
  }
}

}  // namespace nlqs
