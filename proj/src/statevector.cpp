// SPDX-License-Identifier: Apache-2.0
#include "statevector.hpp"

#include <bit>
#include <complex>

#include "common.hpp"

namespace nlqs {

namespace {

std::uint64_t position_mask(int position, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - 1 - position);
}

}  // namespace

Statevector::Statevector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1) {
    throw Error(ErrorKind::InvalidArgument, "statevector needs >= 1 qubit");
  }
  check_statevector_guard(num_qubits, "statevector");
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  amps_[0] = 1.0;
}

void Statevector::apply_unitary(const Eigen::MatrixXcd& u,
                                std::span<const int> positions) {
  const int t = static_cast<int>(positions.size());
  const int sub_dim = 1 << t;
  std::vector<std::uint64_t> scatter(sub_dim, 0);
  std::uint64_t target_mask = 0;
  for (int j = 0; j < t; ++j) {
    target_mask |= position_mask(positions[j], n_);
  }
  for (int s = 0; s < sub_dim; ++s) {
    for (int j = 0; j < t; ++j) {
      if ((s >> (t - 1 - j)) & 1) {
        scatter[s] |= position_mask(positions[j], n_);
      }
    }
  }
  Eigen::VectorXcd block(sub_dim);
  const std::uint64_t dim = std::uint64_t{1} << n_;
  for (std::uint64_t rest = 0; rest < dim; ++rest) {
    if (rest & target_mask) {
      continue;
    }
    for (int s = 0; s < sub_dim; ++s) {
      block[s] = amps_[rest | scatter[s]];
    }
    block = u * block;
    for (int s = 0; s < sub_dim; ++s) {
      amps_[rest | scatter[s]] = block[s];
    }
  }
}

void Statevector::apply_gate(const Gate& gate) {
  apply_unitary(gate.matrix, gate.targets);
}

void Statevector::apply_pauli(int position, int code) {
  using namespace std::complex_literals;
  const std::uint64_t mask = position_mask(position, n_);
  const std::uint64_t dim = std::uint64_t{1} << n_;
  switch (code) {
    case 1:  // X
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (!(i & mask)) {
          std::swap(amps_[i], amps_[i | mask]);
        }
      }
      break;
    case 2:  // Y
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (!(i & mask)) {
          const auto low = amps_[i];
          amps_[i] = -1.0i * amps_[i | mask];
          amps_[i | mask] = 1.0i * low;
        }
      }
      break;
    case 3:  // Z
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & mask) {
          amps_[i] = -amps_[i];
        }
      }
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "pauli code must be 1, 2 or 3");
  }
}

Eigen::VectorXd Statevector::probabilities() const {
  return amps_.cwiseAbs2();
}

std::uint64_t Statevector::sample_measurement(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << n_;
  for (std::uint64_t i = 0; i < dim; ++i) {
    acc += std::norm(amps_[i]);
    if (u < acc) {
      return i;
    }
  }
  return dim - 1;
}

double Statevector::pauli_expectation(std::span<const int> codes) const {
  using namespace std::complex_literals;
  if (static_cast<int>(codes.size()) != n_) {
    throw Error(ErrorKind::InvalidArgument, "pauli word length mismatch");
  }
  std::uint64_t flip_mask = 0;
  std::uint64_t y_mask = 0;
  std::uint64_t z_mask = 0;
  for (int pos = 0; pos < n_; ++pos) {
    const std::uint64_t mask = position_mask(pos, n_);
    switch (codes[pos]) {
      case 1:
        flip_mask |= mask;
        break;
      case 2:
        flip_mask |= mask;
        y_mask |= mask;
        break;
      case 3:
        z_mask |= mask;
        break;
      default:
        break;
    }
  }
  const int y_count = std::popcount(y_mask);
  std::complex<double> y_phase = 1.0;
  for (int i = 0; i < (y_count % 4); ++i) {
    y_phase *= 1.0i;
  }
  std::complex<double> total = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << n_;
  for (std::uint64_t c = 0; c < dim; ++c) {
    // P|c> = phase(c) |c ^ flip_mask>
    const int sign_bits = std::popcount(c & (y_mask | z_mask));
    const double sign = (sign_bits % 2 == 0) ? 1.0 : -1.0;
    total += std::conj(amps_[c ^ flip_mask]) * (y_phase * sign) * amps_[c];
  }
  return total.real();
}

double Statevector::projector_expectation(std::span<const int> positions,
                                          std::uint64_t bits) const {
  std::uint64_t mask = 0;
  std::uint64_t want = 0;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const std::uint64_t m = position_mask(positions[j], n_);
    mask |= m;
    if ((bits >> (positions.size() - 1 - j)) & 1) {
      want |= m;
    }
  }
  double total = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << n_;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & mask) == want) {
      total += std::norm(amps_[i]);
    }
  }
  return total;
}

}  // namespace nlqs
