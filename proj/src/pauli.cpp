// SPDX-License-Identifier: Apache-2.0
#include "pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

#include "common.hpp"

namespace nlqs {

namespace {

constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};

int shift_for(int position, int num_qubits) {
  return 2 * (num_qubits - 1 - position);
}

void require_full_register(int size, const SublatticeGrid& grid) {
  if (size != grid.lattice().qubit_count()) {
    throw Error(ErrorKind::InvalidArgument,
                "operation requires a full-lattice register");
  }
}

std::uint64_t block_mask(std::span<const int> blocks,
                         const SublatticeGrid& grid) {
  std::uint64_t mask = 0;
  for (int b : blocks) {
    if (b < 0 || b >= grid.block_count()) {
      throw Error(ErrorKind::InvalidArgument, "block index out of range");
    }
    mask |= std::uint64_t{1} << b;
  }
  return mask;
}

}  // namespace

PauliString::PauliString(int num_qubits, std::uint64_t word)
    : n_(num_qubits), word_(word) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw Error(ErrorKind::InvalidArgument,
                "pauli string length must lie in [1,31]");
  }
  if (num_qubits < 32 && (word >> (2 * num_qubits)) != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "pauli word has bits beyond its length");
  }
}

PauliString PauliString::identity(int num_qubits) {
  return PauliString(num_qubits, 0);
}

PauliString PauliString::from_string(std::string_view text) {
  const int n = static_cast<int>(text.size());
  std::uint64_t word = 0;
  for (char ch : text) {
    int code = -1;
    for (int k = 0; k < 4; ++k) {
      if (ch == kLetters[k]) {
        code = k;
      }
    }
    if (code < 0) {
      throw Error(ErrorKind::InvalidArgument,
                  "pauli string may only contain I, X, Y, Z");
    }
    word = (word << 2) | static_cast<std::uint64_t>(code);
  }
  return PauliString(n, word);
}

int PauliString::code(int position) const {
  if (position < 0 || position >= n_) {
    throw Error(ErrorKind::InvalidArgument, "pauli position out of range");
  }
  return static_cast<int>((word_ >> shift_for(position, n_)) & 3);
}

PauliString PauliString::with(int position, int code) const {
  if (code < 0 || code > 3) {
    throw Error(ErrorKind::InvalidArgument, "pauli code must be 0..3");
  }
  const int shift = shift_for(position, n_);
  std::uint64_t word = word_ & ~(std::uint64_t{3} << shift);
  word |= static_cast<std::uint64_t>(code) << shift;
  return PauliString(n_, word);
}

int PauliString::weight() const {
  int count = 0;
  for (int pos = 0; pos < n_; ++pos) {
    if (code(pos) != 0) {
      ++count;
    }
  }
  return count;
}

std::vector<int> PauliString::support_positions() const {
  std::vector<int> out;
  for (int pos = 0; pos < n_; ++pos) {
    if (code(pos) != 0) {
      out.push_back(pos);
    }
  }
  return out;
}

std::string PauliString::str() const {
  std::string out(n_, 'I');
  for (int pos = 0; pos < n_; ++pos) {
    out[pos] = kLetters[code(pos)];
  }
  return out;
}

PauliDecomposition::PauliDecomposition(
    std::vector<int> qubits, std::map<std::uint64_t, double> coefficients)
    : qubits_(std::move(qubits)), coefficients_(std::move(coefficients)) {}

double PauliDecomposition::coefficient(const PauliString& p) const {
  if (p.size() != qubit_count()) {
    throw Error(ErrorKind::InvalidArgument, "pauli string length mismatch");
  }
  const auto it = coefficients_.find(p.word());
  return it == coefficients_.end() ? 0.0 : it->second;
}

PauliDecomposition pauli_decompose(const HermitianOperator& op) {
  const int n = op.qubit_count();
  check_dense_guard(n, "pauli_decompose");
  if (n > PauliString::kMaxQubits) {
    throw Error(ErrorKind::Guard, "pauli_decompose supports up to 31 qubits");
  }
  using Complex = std::complex<double>;
  const std::size_t total = std::size_t{1} << (2 * n);
  std::vector<Complex> buf(total);
  std::vector<Complex> next(total);
  const auto& mat = op.matrix();
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      buf[r * dim + c] = mat(r, c);
    }
  }
  // One qubit at a time: contract the (row, column) bit pair of the leading
  // remaining qubit into a Pauli index, prefix-major layout throughout.
  const Complex iu(0.0, 1.0);
  for (int stage = 0; stage < n; ++stage) {
    const std::size_t prefixes = std::size_t{1} << (2 * stage);
    const std::size_t half = std::size_t{1} << (n - stage - 1);
    const std::size_t in_block = 4 * half * half;   // (2 half) x (2 half)
    const std::size_t out_block = half * half;
    for (std::size_t pre = 0; pre < prefixes; ++pre) {
      const Complex* in = buf.data() + pre * in_block;
      Complex* out = next.data() + pre * 4 * out_block;
      for (std::size_t r = 0; r < half; ++r) {
        for (std::size_t c = 0; c < half; ++c) {
          const Complex a00 = in[r * (2 * half) + c];
          const Complex a01 = in[r * (2 * half) + (half + c)];
          const Complex a10 = in[(half + r) * (2 * half) + c];
          const Complex a11 = in[(half + r) * (2 * half) + (half + c)];
          const std::size_t at = r * half + c;
          out[0 * out_block + at] = a00 + a11;             // I
          out[1 * out_block + at] = a01 + a10;             // X
          out[2 * out_block + at] = iu * (a01 - a10);      // Y
          out[3 * out_block + at] = a00 - a11;             // Z
        }
      }
    }
    buf.swap(next);
  }
  std::map<std::uint64_t, double> coeffs;
  auto hint = coeffs.end();
  for (std::size_t word = 0; word < total; ++word) {
    const Complex value = buf[word];
    if (std::abs(value.imag()) > 1e-9) {
      throw Error(ErrorKind::Numeric,
                  "pauli coefficient has a non-real part beyond tolerance");
    }
    if (value.real() != 0.0) {
      hint = coeffs.emplace_hint(hint, static_cast<std::uint64_t>(word),
                                 value.real());
    }
  }
  return PauliDecomposition(op.qubits(), std::move(coeffs));
}

void add_pauli_to_matrix(Eigen::MatrixXcd& mat, const PauliString& p,
                         double weight) {
  using namespace std::complex_literals;
  const int n = p.size();
  if (mat.rows() != (Eigen::Index{1} << n)) {
    throw Error(ErrorKind::InvalidArgument,
                "matrix dimension does not match pauli length");
  }
  std::uint64_t flip = 0;
  std::uint64_t y_mask = 0;
  std::uint64_t z_mask = 0;
  for (int pos = 0; pos < n; ++pos) {
    const std::uint64_t mask = std::uint64_t{1} << (n - 1 - pos);
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
  for (int i = 0; i < std::popcount(y_mask) % 4; ++i) {
    y_phase *= 1.0i;
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  // P|c> = phase(c) |c ^ flip>.
  for (std::uint64_t col = 0; col < dim; ++col) {
    const double sign =
        (std::popcount(col & (y_mask | z_mask)) % 2 == 0) ? 1.0 : -1.0;
    mat(col ^ flip, col) += weight * sign * y_phase;
  }
}

HermitianOperator pauli_reconstruct(const PauliDecomposition& dec) {
  const int n = dec.qubit_count();
  check_dense_guard(n, "pauli_reconstruct");
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << n);
  for (const auto& [word, coeff] : dec.coefficients()) {
    add_pauli_to_matrix(mat, PauliString(n, word), coeff * scale);
  }
  return HermitianOperator(dec.qubits(), std::move(mat));
}

std::vector<int> support(const PauliString& p, const SublatticeGrid& grid) {
  require_full_register(p.size(), grid);
  std::set<int> blocks;
  for (int pos : p.support_positions()) {
    blocks.insert(grid.block_of(pos));
  }
  return {blocks.begin(), blocks.end()};
}

std::optional<PauliString> apply_inclusion_exclusion(
    const PauliString& p, std::span<const int> blocks,
    const SublatticeGrid& grid) {
  const auto supp = support(p, grid);
  const std::uint64_t want = block_mask(blocks, grid);
  const std::uint64_t have = block_mask(supp, grid);
  if (want == have) {
    return p;
  }
  return std::nullopt;
}

HermitianOperator depolarize_blocks(const HermitianOperator& op,
                                    const SublatticeGrid& grid,
                                    std::span<const int> blocks) {
  require_full_register(op.qubit_count(), grid);
  Eigen::MatrixXcd mat = op.matrix();
  for (int b : blocks) {
    for (int q : grid.block(b)) {
      apply_depolarizing_inplace(mat, q, op.qubit_count(), 1.0);
    }
  }
  return HermitianOperator(op.qubits(), std::move(mat));
}

namespace {

std::vector<int> mask_to_blocks(std::uint64_t mask) {
  std::vector<int> out;
  for (int b = 0; mask != 0; ++b, mask >>= 1) {
    if (mask & 1) {
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace

HermitianOperator inclusion_exclusion_m(const HermitianOperator& op,
                                        const SublatticeGrid& grid,
                                        std::span<const int> blocks) {
  require_full_register(op.qubit_count(), grid);
  const std::uint64_t a_mask = block_mask(blocks, grid);
  const auto dim = op.matrix().rows();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  // Signed sum over all B subseteq A, including B = empty (the identity term).
  std::uint64_t b_mask = a_mask;
  while (true) {
    const auto b_blocks = mask_to_blocks(b_mask);
    const double sign = (b_blocks.size() % 2 == 0) ? 1.0 : -1.0;
    total += sign * depolarize_blocks(op, grid, b_blocks).matrix();
    if (b_mask == 0) {
      break;
    }
    b_mask = (b_mask - 1) & a_mask;
  }
  return HermitianOperator(op.qubits(), std::move(total));
}

HermitianOperator inclusion_exclusion_term(const HermitianOperator& op,
                                           const SublatticeGrid& grid,
                                           std::span<const int> blocks) {
  require_full_register(op.qubit_count(), grid);
  const std::uint64_t a_mask = block_mask(blocks, grid);
  std::vector<int> outside;
  for (int b = 0; b < grid.block_count(); ++b) {
    if (!((a_mask >> b) & 1)) {
      outside.push_back(b);
    }
  }
  const auto dim = op.matrix().rows();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  std::uint64_t b_mask = a_mask;
  while (true) {
    auto depolarized = mask_to_blocks(b_mask);
    const double sign = (depolarized.size() % 2 == 0) ? 1.0 : -1.0;
    depolarized.insert(depolarized.end(), outside.begin(), outside.end());
    total += sign * depolarize_blocks(op, grid, depolarized).matrix();
    if (b_mask == 0) {
      break;
    }
    b_mask = (b_mask - 1) & a_mask;
  }
  return HermitianOperator(op.qubits(), std::move(total));
}

HermitianOperator inclusion_exclusion_reconstruct(const HermitianOperator& op,
                                                  const SublatticeGrid& grid) {
  require_full_register(op.qubit_count(), grid);
  const int m = grid.block_count();
  if (m > 16) {
    throw Error(ErrorKind::Guard,
                "inclusion-exclusion reconstruction is limited to 16 blocks");
  }
  const auto dim = op.matrix().rows();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t a_mask = 0; a_mask < (std::uint64_t{1} << m); ++a_mask) {
    const auto blocks = mask_to_blocks(a_mask);
    total += inclusion_exclusion_term(op, grid, blocks).matrix();
  }
  return HermitianOperator(op.qubits(), std::move(total));
}

namespace {

SupportProfile profile_from_mask(std::uint64_t mask,
                                 const SublatticeGrid& grid) {
  SupportProfile profile;
  profile.block_count = std::popcount(mask);
  std::uint64_t pending = mask;
  while (pending != 0) {
    const int seed = std::countr_zero(pending);
    pending &= ~(std::uint64_t{1} << seed);
    int size = 1;
    std::deque<int> frontier{seed};
    while (!frontier.empty()) {
      const int b = frontier.front();
      frontier.pop_front();
      for (int nb : grid.block_neighbors(b)) {
        if (pending & (std::uint64_t{1} << nb)) {
          pending &= ~(std::uint64_t{1} << nb);
          frontier.push_back(nb);
          ++size;
        }
      }
    }
    profile.max_component = std::max(profile.max_component, size);
  }
  return profile;
}

template <typename Keep>
PauliDecomposition filter_decomposition(const PauliDecomposition& dec,
                                        const SublatticeGrid& grid,
                                        Keep keep) {
  require_full_register(dec.qubit_count(), grid);
  const int n = dec.qubit_count();
  std::map<std::uint64_t, SupportProfile> memo;
  std::map<std::uint64_t, double> kept;
  auto hint = kept.end();
  for (const auto& [word, coeff] : dec.coefficients()) {
    const PauliString p(n, word);
    std::uint64_t mask = 0;
    for (int pos : p.support_positions()) {
      mask |= std::uint64_t{1} << grid.block_of(pos);
    }
    auto it = memo.find(mask);
    if (it == memo.end()) {
      it = memo.emplace(mask, profile_from_mask(mask, grid)).first;
    }
    if (keep(it->second)) {
      hint = kept.emplace_hint(hint, word, coeff);
    }
  }
  return PauliDecomposition(dec.qubits(), std::move(kept));
}

}  // namespace

PauliDecomposition truncate_sparse(const PauliDecomposition& dec,
                                   const SublatticeGrid& grid, int k) {
  if (k < 0) {
    throw Error(ErrorKind::InvalidArgument, "k must be >= 0");
  }
  return filter_decomposition(
      dec, grid, [k](const SupportProfile& s) { return s.block_count <= k; });
}

PauliDecomposition truncate_percolated(const PauliDecomposition& dec,
                                       const SublatticeGrid& grid, int ell) {
  if (ell < 0) {
    throw Error(ErrorKind::InvalidArgument, "ell must be >= 0");
  }
  return filter_decomposition(dec, grid, [ell](const SupportProfile& s) {
    return s.max_component <= ell;
  });
}

SupportProfile support_profile(const PauliString& p,
                               const SublatticeGrid& grid) {
  require_full_register(p.size(), grid);
  std::uint64_t mask = 0;
  for (int pos : p.support_positions()) {
    mask |= std::uint64_t{1} << grid.block_of(pos);
  }
  return profile_from_mask(mask, grid);
}

std::string dump_decomposition(const PauliDecomposition& dec) {
  std::ostringstream out;
  const int n = dec.qubit_count();
  char number[64];
  for (const auto& [word, coeff] : dec.coefficients()) {
    std::snprintf(number, sizeof number, "%.17g", coeff);
    out << PauliString(n, word).str() << ' ' << number << '\n';
  }
  return out.str();
}

}  // namespace nlqs
