// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nlqs {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Locality,
  Unitarity,
  Guard,
  Numeric,
  Conditioning,
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Size guards for the dense and statevector backends. Defaults can be
// overridden with NLQS_MAX_DENSE_QUBITS / NLQS_MAX_STATEVECTOR_QUBITS or
// programmatically through the C API.
struct Guards {
  int max_dense_qubits = 13;
  int max_statevector_qubits = 24;
};

Guards& guards();

void check_dense_guard(int qubits, const std::string& what);
void check_statevector_guard(int qubits, const std::string& what);

}  // namespace nlqs
