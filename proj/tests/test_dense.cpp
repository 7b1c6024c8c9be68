// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "circuit.hpp"
#include "common.hpp"
#include "dense.hpp"
#include "rng.hpp"
#include "statevector.hpp"

using namespace nlqs;

namespace {

Gate make_gate(const std::string& name, std::vector<int> targets,
               std::vector<double> params = {}) {
  Gate g;
  g.targets = std::move(targets);
  g.name = name;
  g.params = params;
  g.matrix = named_gate_matrix(name, params);
  return g;
}

Circuit bell_circuit(double p = 0.0) {
  return Circuit(Lattice({2}),
                 {{make_gate("H", {0})}, {make_gate("CNOT", {0, 1})}}, p);
}

State random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) {
    qubits[q] = q;
  }
  return State(qubits, std::move(rho));
}

double zz_expectation(const State& state) {
  const auto& m = state.matrix();
  return (m(0, 0) + m(3, 3) - m(1, 1) - m(2, 2)).real();
}

}  // namespace

TEST_CASE("single qubit depolarizing algebra") {
  const Circuit circuit(Lattice({1}), {{}}, 0.3);  // one noisy identity layer
  const State rho = simulate(circuit);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0 - 0.15).epsilon(1e-12));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.15).epsilon(1e-12));
  const double z = (rho.matrix()(0, 0) - rho.matrix()(1, 1)).real();
  CHECK(z == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("noiseless H gives the plus state") {
  const Circuit circuit(Lattice({1}), {{make_gate("H", {0})}}, 0.0);
  const State rho = simulate(circuit);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(rho.matrix()(r, c).real() == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(rho.matrix()(r, c).imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("bell circuit correlations") {
  const State rho = simulate(bell_circuit());
  CHECK(zz_expectation(rho) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.matrix()(0, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("simulate guards the register size") {
  CHECK_THROWS_AS(simulate(Circuit(Lattice({20}), {}, 0.1)), Error);
}

TEST_CASE("partial trace behaviour") {
  const State bell = simulate(bell_circuit());
  const std::vector<int> keep0{0};
  const auto reduced = partial_trace(bell, keep0);
  CHECK(reduced.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(reduced.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(reduced.matrix()(0, 1)) < 1e-12);

  // Product state reduces to its factor.
  const Circuit product(Lattice({2}), {{make_gate("H", {0})}}, 0.0);
  const State prod = simulate(product);
  const auto left = partial_trace(prod, keep0);
  CHECK(left.matrix()(0, 1).real() == doctest::Approx(0.5));

  // Keeping everything is the identity.
  const std::vector<int> all{0, 1};
  const auto same = partial_trace(bell, all);
  CHECK((same.matrix() - bell.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  const std::vector<int> bad{5};
  CHECK_THROWS_AS(partial_trace(bell, bad), Error);
}

TEST_CASE("dephasing") {
  const Circuit plus(Lattice({1}), {{make_gate("H", {0})}}, 0.0);
  const State rho = simulate(plus);
  const std::vector<int> q0{0};
  const auto dephased = dephase(rho, q0);
  CHECK(std::abs(dephased.matrix()(0, 1)) < 1e-14);
  CHECK(dephased.matrix()(0, 0).real() == doctest::Approx(0.5));
  // Idempotent.
  const auto twice = dephase(dephased, q0);
  CHECK((twice.matrix() - dephased.matrix()).cwiseAbs().maxCoeff() == 0.0);
  // Diagonal states are untouched.
  const State diag = simulate(Circuit(Lattice({1}), {{}}, 0.4));
  const auto same = dephase(diag, q0);
  CHECK((same.matrix() - diag.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("marginals and conditionals") {
  const State bell = simulate(bell_circuit());
  const std::vector<int> q1{1};
  const std::vector<int> q0{0};
  const Distribution cond = conditional_distribution(bell, q1, q0, 0);
  CHECK(cond.probs()[0] == doctest::Approx(1.0));
  CHECK(cond.probs()[1] == doctest::Approx(0.0));

  // Independent qubits: conditional equals marginal.
  const Circuit uniform2(
      Lattice({2}), {{make_gate("H", {0}), make_gate("H", {1})}}, 0.0);
  const State prod = simulate(uniform2);
  const Distribution marginal = marginal_distribution(prod, q1);
  const Distribution conditional = conditional_distribution(prod, q1, q0, 1);
  CHECK(marginal.probs()[0] == doctest::Approx(conditional.probs()[0]));

  // Single-qubit algebra.
  const State noisy = simulate(Circuit(Lattice({1}), {{}}, 0.2));
  const Distribution p = marginal_distribution(noisy, q0);
  CHECK(p.probs()[0] == doctest::Approx(0.9).epsilon(1e-12));

  // Zero-probability conditioning events are rejected.
  const State zero = simulate(Circuit(Lattice({2}), {}, 0.0));
  CHECK_THROWS_AS(conditional_distribution(zero, q1, q0, 1), Error);
}

TEST_CASE("entropies in bits") {
  const State pure = simulate(Circuit(Lattice({1}), {}, 0.0));
  const std::vector<int> q0{0};
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0));
  CHECK(relative_entropy_to_depolarized(pure, q0) == doctest::Approx(1.0));

  // Maximally mixed on two qubits: D = 0 for any subset.
  const auto dim4 = Eigen::MatrixXcd::Identity(4, 4) * 0.25;
  const State sigma({0, 1}, dim4);
  CHECK(relative_entropy_to_depolarized(sigma, q0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const State bell = simulate(bell_circuit());
  CHECK(conditional_entropy(bell, q0) == doctest::Approx(-1.0));
  CHECK(relative_entropy_to_depolarized(bell, q0) == doctest::Approx(2.0));
}

TEST_CASE("trace norm and distance") {
  const State bell = simulate(bell_circuit());
  CHECK(trace_norm(bell) == doctest::Approx(1.0));
  CHECK(trace_distance(bell, bell) == doctest::Approx(0.0));

  const State zero = simulate(Circuit(Lattice({1}), {}, 0.0));
  const State one =
      simulate(Circuit(Lattice({1}), {{make_gate("X", {0})}}, 0.0));
  // Unhalved 1-norm convention: orthogonal pure states sit at 2.
  CHECK(trace_distance(zero, one) == doctest::Approx(2.0));
}

TEST_CASE("pinsker inequality on random states") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const State rho = random_state(n, seed);
    const std::vector<int> a{0};
    const double d_bits = relative_entropy_to_depolarized(rho, a);
    // sigma_A (x) rho_rest assembled by completely depolarizing A.
    Eigen::MatrixXcd depolarized = rho.matrix();
    apply_depolarizing_inplace(depolarized, 0, n, 1.0);
    const HermitianOperator target(rho.qubits(), depolarized);
    const double distance = trace_distance(rho, target);
    CHECK(distance <= std::sqrt(2.0 * std::numbers::ln2 * d_bits) + 1e-9);
  }
}

TEST_CASE("noiseless simulation matches the statevector path") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Circuit circuit =
        random_local_circuit(Lattice({5}), 3, 0.0, seed);
    const State rho = simulate(circuit);
    Statevector psi(5);
    for (const auto& layer : circuit.layers()) {
      for (const Gate& gate : layer) {
        psi.apply_gate(gate);
      }
    }
    const Eigen::MatrixXcd outer =
        psi.amplitudes() * psi.amplitudes().adjoint();
    CHECK((rho.matrix() - outer).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("lightcone simulation equals dense marginals") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Circuit circuit =
        random_local_circuit(Lattice({8}), 3, 0.25, seed);
    const State full = simulate(circuit);
    for (const std::vector<int>& region :
         {std::vector<int>{0}, std::vector<int>{3, 4}, std::vector<int>{7}}) {
      const State cone = simulate_lightcone(circuit, region);
      const State direct = reduced_state(full, region);
      CHECK((cone.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("lightcone simulation reaches past the dense guard") {
  // n = 20 exceeds the dense guard, but an end qubit of a depth-2 circuit
  // has a 5-qubit lightcone at most.
  const Circuit circuit = random_local_circuit(Lattice({20}), 2, 0.1, 9);
  const std::vector<int> region{0};
  const State end = simulate_lightcone(circuit, region);
  CHECK(end.qubit_count() == 1);
  CHECK(end.trace() == doctest::Approx(1.0));
  CHECK_THROWS_AS(simulate(circuit), Error);

  // Depth zero: the requested qubit stays |0><0|.
  const Circuit idle(Lattice({6}), {}, 0.3);
  const std::vector<int> q3{3};
  const State untouched = simulate_lightcone(idle, q3);
  CHECK(untouched.matrix()(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("entropy is unitarily invariant and additive") {
  const State rho = random_state(2, 77);
  Eigen::MatrixXcd rotated = rho.matrix();
  apply_unitary_inplace(rotated, named_gate_matrix("H", {}),
                        std::vector<int>{0}, 2);
  const State after({0, 1}, rotated);
  CHECK(von_neumann_entropy(after) ==
        doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));

  const State a = random_state(1, 5);
  const State b = random_state(1, 6);
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(4, 4);
  for (int r1 = 0; r1 < 2; ++r1) {
    for (int c1 = 0; c1 < 2; ++c1) {
      for (int r2 = 0; r2 < 2; ++r2) {
        for (int c2 = 0; c2 < 2; ++c2) {
          prod(2 * r1 + r2, 2 * c1 + c2) =
              a.matrix()(r1, c1) * b.matrix()(r2, c2);
        }
      }
    }
  }
  const State joint({0, 1}, prod);
  CHECK(von_neumann_entropy(joint) ==
        doctest::Approx(von_neumann_entropy(a) + von_neumann_entropy(b))
            .epsilon(1e-9));
}

TEST_CASE("non-hermitian and badly normalized input is rejected") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, std::complex<double>(0.0, 0.5), 0.0, 0.0;
  CHECK_THROWS_AS(HermitianOperator({0}, bad), Error);
  CHECK_THROWS_AS(State({0}, Eigen::MatrixXcd::Identity(2, 2)), Error);
}

namespace {

// Independent oracle: D(rho || tau) = Tr rho log2 rho - Tr rho log2 tau,
// via full eigendecompositions of both operators.
double relative_entropy_direct(const State& rho,
                               const Eigen::MatrixXcd& tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_eig(rho.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> tau_eig(tau);
  double entropy_term = 0.0;
  for (Eigen::Index i = 0; i < rho_eig.eigenvalues().size(); ++i) {
    const double lambda = std::max(rho_eig.eigenvalues()[i], 0.0);
    if (lambda > 0.0) {
      entropy_term += lambda * std::log2(lambda);
    }
  }
  Eigen::VectorXd log_tau = tau_eig.eigenvalues();
  for (Eigen::Index i = 0; i < log_tau.size(); ++i) {
    log_tau[i] = std::log2(std::max(log_tau[i], 1e-300));
  }
  const Eigen::MatrixXcd log_tau_mat = tau_eig.eigenvectors() *
                                       log_tau.asDiagonal() *
                                       tau_eig.eigenvectors().adjoint();
  const double cross_term = (rho.matrix() * log_tau_mat).trace().real();
  return entropy_term - cross_term;
}

}  // namespace

TEST_CASE("relative entropy to depolarized matches a direct computation") {
  // Random full-rank states and noisy circuit outputs, several subset sizes.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const State rho = random_state(3, 400 + seed);
    for (const std::vector<int>& a :
         {std::vector<int>{0}, std::vector<int>{1, 2},
          std::vector<int>{0, 1, 2}}) {
      Eigen::MatrixXcd tau = rho.matrix();
      for (int q : a) {
        apply_depolarizing_inplace(tau, q, 3, 1.0);
      }
      CHECK(relative_entropy_to_depolarized(rho, a) ==
            doctest::Approx(relative_entropy_direct(rho, tau))
                .epsilon(1e-8));
    }
  }
  const Circuit circuit = random_local_circuit(Lattice({4}), 2, 0.3, 19);
  const State out = simulate(circuit);
  const std::vector<int> a{1, 2};
  Eigen::MatrixXcd tau = out.matrix();
  for (int q : a) {
    apply_depolarizing_inplace(tau, q, 4, 1.0);
  }
  CHECK(relative_entropy_to_depolarized(out, a) ==
        doctest::Approx(relative_entropy_direct(out, tau)).epsilon(1e-8));
}

TEST_CASE("entropy rejects eigenvalues outside tolerance") {
  Eigen::MatrixXcd indefinite(2, 2);
  indefinite << 1.1, 0.0, 0.0, -0.1;
  const State crooked({0}, indefinite);  // hermitian, unit trace, not PSD
  CHECK_THROWS_AS(von_neumann_entropy(crooked), Error);

  // Tiny negative drift is clipped instead.
  Eigen::MatrixXcd nearly(2, 2);
  nearly << 1.0 + 1e-12, 0.0, 0.0, -1e-12;
  const State fine({0}, nearly);
  CHECK(von_neumann_entropy(fine) == doctest::Approx(0.0).epsilon(1e-9));
}
