// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "circuit.hpp"
#include "common.hpp"
#include "dense.hpp"
#include "pauli.hpp"

using namespace nlqs;

namespace {

Gate make_gate(const std::string& name, std::vector<int> targets) {
  Gate g;
  g.targets = std::move(targets);
  g.name = name;
  g.matrix = named_gate_matrix(name, {});
  return g;
}

State bell_state() {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return State({0, 1}, rho);
}

State maximally_mixed(int n) {
  const auto dim = Eigen::Index{1} << n;
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) {
    qubits[q] = q;
  }
  return State(qubits,
               Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace

TEST_CASE("pauli string packing is lexicographic") {
  const PauliString p = PauliString::from_string("IXYZ");
  CHECK(p.str() == "IXYZ");
  CHECK(p.code(0) == 0);
  CHECK(p.code(1) == 1);
  CHECK(p.code(2) == 2);
  CHECK(p.code(3) == 3);
  CHECK(p.weight() == 3);
  CHECK(p.support_positions() == std::vector<int>{1, 2, 3});
  CHECK(PauliString::from_string("II").word() <
        PauliString::from_string("IX").word());
  CHECK(PauliString::from_string("IZ").word() <
        PauliString::from_string("XI").word());
  CHECK_THROWS_AS(PauliString::from_string("AB"), Error);
}

TEST_CASE("decomposition of elementary states") {
  const State zero = simulate(Circuit(Lattice({1}), {}, 0.0));
  const PauliDecomposition dec = pauli_decompose(zero);
  CHECK(dec.coefficient(PauliString::from_string("I")) == doctest::Approx(1.0));
  CHECK(dec.coefficient(PauliString::from_string("Z")) == doctest::Approx(1.0));
  CHECK(dec.coefficient(PauliString::from_string("X")) == doctest::Approx(0.0));
  CHECK(dec.coefficient(PauliString::from_string("Y")) == doctest::Approx(0.0));

  const PauliDecomposition mixed = pauli_decompose(maximally_mixed(3));
  CHECK(mixed.coefficients().size() == 1);
  CHECK(mixed.coefficient(PauliString::identity(3)) == doctest::Approx(1.0));

  const PauliDecomposition bell = pauli_decompose(bell_state());
  CHECK(bell.coefficient(PauliString::from_string("II")) == doctest::Approx(1.0));
  CHECK(bell.coefficient(PauliString::from_string("XX")) == doctest::Approx(1.0));
  CHECK(bell.coefficient(PauliString::from_string("YY")) ==
        doctest::Approx(-1.0));
  CHECK(bell.coefficient(PauliString::from_string("ZZ")) == doctest::Approx(1.0));
  CHECK(bell.coefficient(PauliString::from_string("XZ")) == doctest::Approx(0.0));
}

TEST_CASE("decompose and reconstruct round-trip") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Circuit circuit = random_local_circuit(Lattice({5}), 3, 0.2, seed);
    const State rho = simulate(circuit);
    const HermitianOperator back = pauli_reconstruct(pauli_decompose(rho));
    CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("support of pauli strings over blocks") {
  const Lattice line({4});
  const SublatticeGrid grid(line, 2);
  CHECK(support(PauliString::from_string("IIII"), grid).empty());
  CHECK(support(PauliString::from_string("ZIII"), grid) == std::vector<int>{0});
  CHECK(support(PauliString::from_string("XIIY"), grid) ==
        std::vector<int>{0, 1});
}

TEST_CASE("pauli projection rule") {
  const Lattice pair({2});
  const SublatticeGrid grid(pair, 1);  // two single-qubit blocks
  const PauliString zi = PauliString::from_string("ZI");
  const std::vector<int> first{0};
  const std::vector<int> second{1};
  const std::vector<int> both{0, 1};
  CHECK(apply_inclusion_exclusion(zi, first, grid) == zi);
  CHECK_FALSE(apply_inclusion_exclusion(zi, second, grid).has_value());
  CHECK_FALSE(apply_inclusion_exclusion(zi, both, grid).has_value());
}

TEST_CASE("inclusion-exclusion terms") {
  const Lattice line({4});
  const SublatticeGrid grid(line, 2);
  const Circuit circuit = random_local_circuit(line, 2, 0.3, 11);
  const State rho = simulate(circuit);

  // A = empty: the term is the fully depolarized state.
  const auto dim = rho.matrix().rows();
  const auto sigma = Eigen::MatrixXcd::Identity(dim, dim) /
                     static_cast<double>(dim);
  const auto empty_term =
      inclusion_exclusion_term(rho, grid, std::vector<int>{});
  CHECK((empty_term.matrix() - sigma).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(empty_term.trace() == doctest::Approx(1.0));

  // Non-empty terms are traceless; on sigma they vanish entirely.
  const std::vector<int> one_block{0};
  CHECK(inclusion_exclusion_term(rho, grid, one_block).trace() ==
        doctest::Approx(0.0).epsilon(1e-12));
  const State sigma_state = maximally_mixed(4);
  const std::vector<int> all_blocks{0, 1};
  CHECK(inclusion_exclusion_term(sigma_state, grid, all_blocks)
            .matrix()
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // Pauli-basis cross-check: each term gathers exactly the words whose
  // support equals A.
  const PauliDecomposition dec = pauli_decompose(rho);
  for (const std::vector<int>& blocks :
       {std::vector<int>{}, std::vector<int>{0}, std::vector<int>{1},
        std::vector<int>{0, 1}}) {
    std::map<std::uint64_t, double> filtered;
    for (const auto& [word, coeff] : dec.coefficients()) {
      if (support(PauliString(4, word), grid) == blocks) {
        filtered[word] = coeff;
      }
    }
    const HermitianOperator via_pauli =
        pauli_reconstruct(PauliDecomposition(dec.qubits(), filtered));
    const HermitianOperator via_dense =
        inclusion_exclusion_term(rho, grid, blocks);
    CHECK((via_pauli.matrix() - via_dense.matrix()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("inclusion-exclusion reconstruction is complete") {
  const Lattice line({6});
  const SublatticeGrid grid(line, 2);  // m = 3
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Circuit circuit = random_local_circuit(line, 3, 0.3, seed);
    const State rho = simulate(circuit);
    const HermitianOperator sum = inclusion_exclusion_reconstruct(rho, grid);
    CHECK((sum.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }

  // On sigma only the empty term contributes.
  const State sigma_state = maximally_mixed(4);
  const SublatticeGrid grid2(Lattice({4}), 2);
  for (const std::vector<int>& blocks :
       {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 1}}) {
    CHECK(inclusion_exclusion_term(sigma_state, grid2, blocks)
              .matrix()
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  // Product of block-local states: terms containing the sigma block vanish.
  Eigen::MatrixXcd plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  Eigen::MatrixXcd product = Eigen::MatrixXcd::Zero(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      product(2 * r, 2 * c) = plus(r, c) * 0.5;
      product(2 * r + 1, 2 * c + 1) = plus(r, c) * 0.5;
    }
  }
  const State mixed_second({0, 1}, product);
  const SublatticeGrid singles(Lattice({2}), 1);
  const std::vector<int> second{1};
  CHECK(inclusion_exclusion_term(mixed_second, singles, second)
            .matrix()
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const std::vector<int> both{0, 1};
  CHECK(inclusion_exclusion_term(mixed_second, singles, both)
            .matrix()
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const std::vector<int> first{0};
  CHECK(inclusion_exclusion_term(mixed_second, singles, first)
            .matrix()
            .cwiseAbs()
            .maxCoeff() > 0.1);
}

TEST_CASE("sparse truncation") {
  const SublatticeGrid singles(Lattice({2}), 1);
  const PauliDecomposition bell = pauli_decompose(bell_state());
  const PauliDecomposition k1 = truncate_sparse(bell, singles, 1);
  CHECK(k1.coefficients().size() == 1);
  CHECK(k1.coefficient(PauliString::identity(2)) == doctest::Approx(1.0));
  const HermitianOperator back = pauli_reconstruct(k1);
  CHECK((back.matrix() - Eigen::MatrixXcd::Identity(4, 4) * 0.25)
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // k = m keeps everything, k = 0 keeps only the trace term.
  const PauliDecomposition km = truncate_sparse(bell, singles, 2);
  CHECK(km.coefficients() == bell.coefficients());
  const PauliDecomposition k0 = truncate_sparse(bell, singles, 0);
  CHECK(k0.coefficients().size() == 1);
}

TEST_CASE("percolated truncation by component size") {
  const Lattice line({6});
  const SublatticeGrid grid(line, 2);  // blocks {0,1},{2,3},{4,5}
  const int n = 6;
  // Support {J_0, J_2}: two singleton components, kept at ell = 1.
  const PauliString split =
      PauliString::identity(n).with(0, 3).with(4, 3);
  // Support {J_0, J_1}: one component of size 2, dropped at ell = 1.
  const PauliString joined =
      PauliString::identity(n).with(0, 3).with(2, 3);
  std::map<std::uint64_t, double> coeffs{{split.word(), 0.5},
                                         {joined.word(), 0.25},
                                         {PauliString::identity(n).word(), 1.0}};
  const PauliDecomposition dec({0, 1, 2, 3, 4, 5}, coeffs);
  const PauliDecomposition ell1 = truncate_percolated(dec, grid, 1);
  CHECK(ell1.coefficient(split) == doctest::Approx(0.5));
  CHECK(ell1.coefficient(joined) == doctest::Approx(0.0));
  const PauliDecomposition ell3 = truncate_percolated(dec, grid, 3);
  CHECK(ell3.coefficients() == dec.coefficients());
}

TEST_CASE("truncation routes agree and nest") {
  const Lattice line({6});
  const SublatticeGrid grid(line, 2);
  const Circuit circuit = random_local_circuit(line, 3, 0.3, 21);
  const State rho = simulate(circuit);
  const PauliDecomposition dec = pauli_decompose(rho);
  const int m = grid.block_count();

  for (int k = 0; k <= m; ++k) {
    // Inclusion-exclusion route: sum the terms with |A| <= k.
    Eigen::MatrixXcd via_ie =
        Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<int> blocks;
      for (int b = 0; b < m; ++b) {
        if ((mask >> b) & 1) {
          blocks.push_back(b);
        }
      }
      if (static_cast<int>(blocks.size()) <= k) {
        via_ie += inclusion_exclusion_term(rho, grid, blocks).matrix();
      }
    }
    const HermitianOperator via_pauli =
        pauli_reconstruct(truncate_sparse(dec, grid, k));
    CHECK((via_ie - via_pauli.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }

  for (int ell = 0; ell <= m; ++ell) {
    Eigen::MatrixXcd via_ie =
        Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<int> blocks;
      for (int b = 0; b < m; ++b) {
        if ((mask >> b) & 1) {
          blocks.push_back(b);
        }
      }
      const auto components = connected_components(grid, blocks);
      bool keep = true;
      for (const auto& component : components) {
        if (static_cast<int>(component.size()) > ell) {
          keep = false;
        }
      }
      if (keep) {
        via_ie += inclusion_exclusion_term(rho, grid, blocks).matrix();
      }
    }
    const HermitianOperator via_pauli =
        pauli_reconstruct(truncate_percolated(dec, grid, ell));
    CHECK((via_ie - via_pauli.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }

  // rho_{perc,l} keeps at least the words rho_{sparse,k} keeps when l >= k.
  for (int k = 0; k <= m; ++k) {
    const auto sparse = truncate_sparse(dec, grid, k);
    const auto perc = truncate_percolated(dec, grid, k);
    for (const auto& [word, coeff] : sparse.coefficients()) {
      CHECK(perc.coefficient(PauliString(6, word)) == doctest::Approx(coeff));
    }
  }
}

TEST_CASE("truncations preserve the trace term and commute with dephasing") {
  const Lattice line({4});
  const SublatticeGrid grid(line, 2);
  const Circuit circuit = random_local_circuit(line, 2, 0.2, 5);
  const State rho = simulate(circuit);
  const PauliDecomposition dec = pauli_decompose(rho);
  const std::vector<int> all{0, 1, 2, 3};

  for (int k = 0; k <= 2; ++k) {
    const PauliDecomposition truncated = truncate_sparse(dec, grid, k);
    CHECK(truncated.coefficient(PauliString::identity(4)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Truncating then dephasing equals dephasing then truncating: dephasing
    // kills exactly the words containing X or Y.
    const HermitianOperator t_then_d =
        dephase(pauli_reconstruct(truncated), all);
    const PauliDecomposition dephased_dec =
        pauli_decompose(dephase(rho, all));
    const HermitianOperator d_then_t =
        pauli_reconstruct(truncate_sparse(dephased_dec, grid, k));
    CHECK((t_then_d.matrix() - d_then_t.matrix()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("decomposition dump format") {
  const PauliDecomposition bell = pauli_decompose(bell_state());
  CHECK(dump_decomposition(bell) == "II 1\nXX 1\nYY -1\nZZ 1\n");
  const PauliDecomposition zero =
      pauli_decompose(simulate(Circuit(Lattice({1}), {}, 0.0)));
  CHECK(dump_decomposition(zero) == "I 1\nZ 1\n");
}
