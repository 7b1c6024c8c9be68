// SPDX-License-Identifier: Apache-2.0
#include "circuit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "common.hpp"
#include "rng.hpp"

namespace nlqs {

namespace {

using namespace std::complex_literals;

constexpr double kUnitaryTol = 1e-9;

void check_unitary(const Eigen::MatrixXcd& u, const std::string& what) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  const double deviation =
      (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (deviation > kUnitaryTol) {
    std::ostringstream msg;
    msg << what << " is not unitary (max deviation " << deviation << ")";
    throw Error(ErrorKind::Unitarity, msg.str());
  }
}

struct LineColumn {
  std::size_t line = 1;
  std::size_t column = 1;
};

LineColumn locate(const std::string& text, std::size_t byte) {
  LineColumn lc;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

}  // namespace

Eigen::MatrixXcd named_gate_matrix(const std::string& name,
                                   std::span<const double> params) {
  auto need_params = [&](std::size_t count) {
    if (params.size() != count) {
      throw Error(ErrorKind::Parse, "gate " + name + " expects " +
                                        std::to_string(count) + " parameter(s)");
    }
  };
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd m;
  if (name == "H") {
    need_params(0);
    m.resize(2, 2);
    m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
  } else if (name == "X") {
    need_params(0);
    m.resize(2, 2);
    m << 0, 1, 1, 0;
  } else if (name == "Y") {
    need_params(0);
    m.resize(2, 2);
    m << 0.0, -1.0i, 1.0i, 0.0;
  } else if (name == "Z") {
    need_params(0);
    m.resize(2, 2);
    m << 1, 0, 0, -1;
  } else if (name == "S") {
    need_params(0);
    m.resize(2, 2);
    m << 1.0, 0.0, 0.0, 1.0i;
  } else if (name == "T") {
    need_params(0);
    m.resize(2, 2);
    m << 1.0, 0.0, 0.0, std::exp(1.0i * std::numbers::pi / 4.0);
  } else if (name == "RZ") {
    need_params(1);
    m.resize(2, 2);
    m << std::exp(-0.5i * params[0]), 0.0, 0.0, std::exp(0.5i * params[0]);
  } else if (name == "RY") {
    need_params(1);
    const double half = params[0] / 2.0;
    m.resize(2, 2);
    m << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
  } else if (name == "CZ") {
    need_params(0);
    m = Eigen::MatrixXcd::Identity(4, 4);
    m(3, 3) = -1.0;
  } else if (name == "CNOT") {
    need_params(0);
    m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
  } else if (name == "SWAP") {
    need_params(0);
    m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = 1.0;
  } else {
    throw Error(ErrorKind::Parse, "unknown gate name: " + name);
  }
  return m;
}

Circuit::Circuit(Lattice lattice, std::vector<std::vector<Gate>> layers,
                 double p, Validate validate)
    : lattice_(std::move(lattice)), layers_(std::move(layers)), p_(p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "noise strength must lie in [0,1)");
  }
  const int n = lattice_.qubit_count();
  for (std::size_t layer = 0; layer < layers_.size(); ++layer) {
    std::set<int> used;
    for (Gate& gate : layers_[layer]) {
      if (gate.targets.empty() || gate.targets.size() > 2) {
        throw Error(ErrorKind::InvalidArgument,
                    "gate must act on one or two qubits");
      }
      for (int q : gate.targets) {
        if (q < 0 || q >= n) {
          throw Error(ErrorKind::InvalidArgument,
                      "gate target out of range in layer " +
                          std::to_string(layer + 1));
        }
        if (!used.insert(q).second) {
          throw Error(ErrorKind::InvalidArgument,
                      "overlapping gate targets in layer " +
                          std::to_string(layer + 1));
        }
      }
      const auto dim = static_cast<Eigen::Index>(1) << gate.targets.size();
      if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
        throw Error(ErrorKind::InvalidArgument,
                    "gate matrix dimension does not match target count");
      }
      check_unitary(gate.matrix, "gate in layer " + std::to_string(layer + 1));
    }
  }
  if (validate == Validate::Full) {
    const auto violations = validate_geometric_locality(*this, lattice_);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << "circuit is not geometrically local: gate on qubits (";
      const auto& v = violations.front();
      for (std::size_t i = 0; i < v.targets.size(); ++i) {
        msg << (i ? "," : "") << v.targets[i];
      }
      msg << ") in layer " << v.layer + 1;
      throw Error(ErrorKind::Locality, msg.str());
    }
  }
}

std::string Circuit::hash() const {
  const std::string text = serialize_circuit(*this);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::vector<LocalityViolation> validate_geometric_locality(
    const Circuit& circuit, const Lattice& lattice) {
  std::vector<LocalityViolation> violations;
  const auto& layers = circuit.layers();
  for (std::size_t layer = 0; layer < layers.size(); ++layer) {
    for (const Gate& gate : layers[layer]) {
      if (gate.targets.size() == 2 &&
          !lattice.adjacent(gate.targets[0], gate.targets[1])) {
        violations.push_back(
            {static_cast<int>(layer), gate.targets});
      }
    }
  }
  return violations;
}

namespace {

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& rows,
                                  std::size_t targets) {
  const auto dim = static_cast<Eigen::Index>(1) << targets;
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::Parse, "gate matrix must have 2^targets rows");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorKind::Parse, "gate matrix row has wrong length");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw Error(ErrorKind::Parse,
                    "matrix entries must be [re, im] number pairs");
      }
      m(r, c) = std::complex<double>(entry[0].get<double>(),
                                     entry[1].get<double>());
    }
  }
  return m;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const LineColumn lc = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "circuit file syntax error at line " << lc.line << ", column "
        << lc.column << ": " << e.what();
    throw Error(ErrorKind::Parse, msg.str());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::Parse, "circuit file must be a JSON object");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw Error(ErrorKind::Parse, "missing integer field: version");
  }
  if (doc["version"].get<int>() != 1) {
    throw Error(ErrorKind::Parse, "unsupported circuit file version");
  }
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty()) {
    throw Error(ErrorKind::Parse, "missing non-empty array field: dims");
  }
  std::vector<int> dims;
  for (const auto& side : doc["dims"]) {
    if (!side.is_number_integer() || side.get<int>() < 1) {
      throw Error(ErrorKind::Parse, "dims entries must be positive integers");
    }
    dims.push_back(side.get<int>());
  }
  if (!doc.contains("p") || !doc["p"].is_number()) {
    throw Error(ErrorKind::Parse, "missing number field: p");
  }
  const double p = doc["p"].get<double>();
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorKind::Parse, "p must lie in [0,1)");
  }
  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    throw Error(ErrorKind::Parse, "missing array field: layers");
  }

  Lattice lattice(dims);
  std::vector<std::vector<Gate>> layers;
  for (const auto& layer_doc : doc["layers"]) {
    if (!layer_doc.is_array()) {
      throw Error(ErrorKind::Parse, "each layer must be an array of gates");
    }
    std::vector<Gate> layer;
    for (const auto& gate_doc : layer_doc) {
      if (!gate_doc.is_object()) {
        throw Error(ErrorKind::Parse, "each gate must be an object");
      }
      Gate gate;
      if (!gate_doc.contains("targets") || !gate_doc["targets"].is_array() ||
          gate_doc["targets"].empty() || gate_doc["targets"].size() > 2) {
        throw Error(ErrorKind::Parse,
                    "gate targets must list one or two qubits");
      }
      for (const auto& t : gate_doc["targets"]) {
        if (!t.is_number_integer()) {
          throw Error(ErrorKind::Parse, "gate targets must be integers");
        }
        gate.targets.push_back(t.get<int>());
      }
      if (gate_doc.contains("params")) {
        if (!gate_doc["params"].is_array()) {
          throw Error(ErrorKind::Parse, "gate params must be an array");
        }
        for (const auto& v : gate_doc["params"]) {
          if (!v.is_number()) {
            throw Error(ErrorKind::Parse, "gate params must be numbers");
          }
          gate.params.push_back(v.get<double>());
        }
      }
      if (gate_doc.contains("matrix")) {
        gate.explicit_matrix = true;
        gate.matrix = matrix_from_json(gate_doc["matrix"], gate.targets.size());
      } else if (gate_doc.contains("name") && gate_doc["name"].is_string()) {
        gate.name = gate_doc["name"].get<std::string>();
        gate.matrix = named_gate_matrix(gate.name, gate.params);
        const auto expected =
            static_cast<Eigen::Index>(1) << gate.targets.size();
        if (gate.matrix.rows() != expected) {
          throw Error(ErrorKind::Parse,
                      "gate " + gate.name + " target count mismatch");
        }
      } else {
        throw Error(ErrorKind::Parse, "gate needs a name or explicit matrix");
      }
      layer.push_back(std::move(gate));
    }
    layers.push_back(std::move(layer));
  }
  return Circuit(std::move(lattice), std::move(layers), p);
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open circuit file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_circuit(buffer.str());
}

std::string serialize_circuit(const Circuit& circuit) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["dims"] = circuit.lattice().dims();
  doc["p"] = circuit.noise();
  doc["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : circuit.layers()) {
    nlohmann::ordered_json layer_doc = nlohmann::ordered_json::array();
    for (const Gate& gate : layer) {
      nlohmann::ordered_json gate_doc;
      gate_doc["targets"] = gate.targets;
      if (gate.explicit_matrix) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < gate.matrix.rows(); ++r) {
          nlohmann::ordered_json row = nlohmann::ordered_json::array();
          for (Eigen::Index c = 0; c < gate.matrix.cols(); ++c) {
            row.push_back({gate.matrix(r, c).real(), gate.matrix(r, c).imag()});
          }
          rows.push_back(std::move(row));
        }
        gate_doc["matrix"] = std::move(rows);
      } else {
        gate_doc["name"] = gate.name;
        if (!gate.params.empty()) {
          gate_doc["params"] = gate.params;
        }
      }
      layer_doc.push_back(std::move(gate_doc));
    }
    doc["layers"].push_back(std::move(layer_doc));
  }
  return doc.dump();
}

namespace {

Eigen::MatrixXcd haar_unitary(int dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      g(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar.
  for (int c = 0; c < dim; ++c) {
    const std::complex<double> d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0.0) ? d / mag : 1.0;
  }
  return q;
}

const std::vector<std::string> kNamedTwoQubit = {"CNOT", "CZ", "SWAP"};

}  // namespace

Circuit random_local_circuit(const Lattice& lattice, int depth, double p,
                             std::uint64_t seed, GateSet gateset) {
  if (depth < 0) {
    throw Error(ErrorKind::InvalidArgument, "depth must be >= 0");
  }
  Rng rng(seed);
  const int dimension = lattice.dimension();
  std::vector<std::vector<Gate>> layers;
  layers.reserve(depth);
  for (int layer = 0; layer < depth; ++layer) {
    const int phase = layer % (2 * dimension);
    const int axis = phase / 2;
    const int parity = phase % 2;
    std::vector<Gate> gates;
    // Row-major sweep keeps gate order (and hence the RNG stream) stable.
    for (int q = 0; q < lattice.qubit_count(); ++q) {
      const auto c = lattice.coords(q);
      if (c[axis] % 2 != parity || c[axis] + 1 >= lattice.dims()[axis]) {
        continue;
      }
      auto partner = c;
      partner[axis] += 1;
      Gate gate;
      gate.targets = {q, lattice.index(partner)};
      if (gateset == GateSet::Haar) {
        gate.explicit_matrix = true;
        gate.matrix = haar_unitary(4, rng);
      } else {
        gate.name = kNamedTwoQubit[rng.below(kNamedTwoQubit.size())];
        gate.matrix = named_gate_matrix(gate.name, {});
      }
      gates.push_back(std::move(gate));
    }
    layers.push_back(std::move(gates));
  }
  Circuit circuit(lattice, std::move(layers), p);
  CircuitOrigin origin;
  origin.random = true;
  origin.seed = seed;
  origin.generator = Rng::kName;
  origin.gateset = gateset == GateSet::Haar ? "haar" : "named";
  circuit.set_origin(std::move(origin));
  return circuit;
}

}  // namespace nlqs
