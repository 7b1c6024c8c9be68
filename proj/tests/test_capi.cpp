// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "nlqs.h"

namespace {

struct Holder {
  char* text = nullptr;
  ~Holder() { nlqs_string_free(text); }
  std::string str() const { return text == nullptr ? "" : text; }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(nlqs_version()).size() > 0);
  CHECK(std::string(nlqs_status_name(NLQS_OK)) == "ok");
  CHECK(std::string(nlqs_status_name(NLQS_ERR_GUARD)) == "guard_exceeded");
}

TEST_CASE("parsing through the C surface") {
  const char* text = R"({
    "version": 1, "dims": [4], "p": 0.1,
    "layers": [[{"targets": [0, 1], "name": "CNOT"}]]
  })";
  nlqs_circuit* circuit = nullptr;
  REQUIRE(nlqs_circuit_parse(text, &circuit) == NLQS_OK);
  CHECK(nlqs_circuit_qubits(circuit) == 4);
  CHECK(nlqs_circuit_depth(circuit) == 1);
  CHECK(nlqs_circuit_noise(circuit) == doctest::Approx(0.1));

  Holder serialized;
  REQUIRE(nlqs_circuit_serialize(circuit, &serialized.text) == NLQS_OK);
  nlqs_circuit* again = nullptr;
  REQUIRE(nlqs_circuit_parse(serialized.text, &again) == NLQS_OK);
  Holder hash_a;
  Holder hash_b;
  REQUIRE(nlqs_circuit_hash(circuit, &hash_a.text) == NLQS_OK);
  REQUIRE(nlqs_circuit_hash(again, &hash_b.text) == NLQS_OK);
  CHECK(hash_a.str() == hash_b.str());
  CHECK(hash_a.str().size() == 16);
  nlqs_circuit_free(again);
  nlqs_circuit_free(circuit);
}

TEST_CASE("error codes and messages") {
  nlqs_circuit* circuit = nullptr;
  CHECK(nlqs_circuit_parse("not json", &circuit) == NLQS_ERR_PARSE);
  CHECK(std::string(nlqs_last_error()).find("line") != std::string::npos);

  const char* nonlocal = R"({
    "version": 1, "dims": [4], "p": 0.0,
    "layers": [[{"targets": [0, 2], "name": "CZ"}]]
  })";
  CHECK(nlqs_circuit_parse(nonlocal, &circuit) == NLQS_ERR_LOCALITY);

  CHECK(nlqs_circuit_parse(nullptr, &circuit) == NLQS_ERR_INVALID_ARGUMENT);

  // Guard errors surface as NLQS_ERR_GUARD.
  const int32_t dims[] = {30};
  nlqs_circuit* big = nullptr;
  REQUIRE(nlqs_circuit_random(dims, 1, 1, 0.1, 0, "haar", &big) == NLQS_OK);
  Holder records;
  CHECK(nlqs_simulate_summary(big, 4, &records.text) == NLQS_ERR_GUARD);
  nlqs_circuit_free(big);
}

TEST_CASE("random circuits and sampling") {
  const int32_t dims[] = {6};
  nlqs_circuit* circuit = nullptr;
  REQUIRE(nlqs_circuit_random(dims, 1, 3, 0.2, 9, "haar", &circuit) == NLQS_OK);

  nlqs_sample_request request{};
  request.method = "exact";
  request.seed = 4;
  request.count = 25;
  Holder bits;
  Holder meta;
  REQUIRE(nlqs_sample(circuit, &request, &bits.text, &meta.text) == NLQS_OK);
  // 25 lines of 6 characters.
  const std::string text = bits.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 25);
  CHECK(text.size() == 25 * 7);
  CHECK(meta.str().find("\"method\":\"exact\"") != std::string::npos);
  CHECK(meta.str().find("\"generator\":\"mt19937_64\"") != std::string::npos);

  // Empty batches are fine.
  request.count = 0;
  Holder none_bits;
  Holder none_meta;
  REQUIRE(nlqs_sample(circuit, &request, &none_bits.text, &none_meta.text) ==
          NLQS_OK);
  CHECK(none_bits.str().empty());

  request.method = "patching";
  request.ell = 1;
  request.width = 2;
  request.count = 5;
  Holder patch_bits;
  Holder patch_meta;
  REQUIRE(nlqs_sample(circuit, &request, &patch_bits.text, &patch_meta.text) ==
          NLQS_OK);
  CHECK(patch_meta.str().find("\"ell\":1") != std::string::npos);

  request.method = "bogus";
  CHECK(nlqs_sample(circuit, &request, &patch_bits.text, &patch_meta.text) ==
        NLQS_ERR_INVALID_ARGUMENT);

  Holder summary;
  REQUIRE(nlqs_simulate_summary(circuit, 4, &summary.text) == NLQS_OK);
  CHECK(summary.str().find("\"record\":\"simulate_summary\"") !=
        std::string::npos);

  Holder decompose;
  REQUIRE(nlqs_decompose_stats(circuit, 2, &decompose.text) == NLQS_OK);
  CHECK(decompose.str().find("pauli_mass_by_support_size") !=
        std::string::npos);

  Holder gaps;
  REQUIRE(nlqs_markov_gap_sweep(circuit, 2, 1, &gaps.text) == NLQS_OK);
  CHECK(gaps.str().find("\"record\":\"markov_gap\"") != std::string::npos);

  nlqs_circuit_free(circuit);
}

TEST_CASE("critical depth through the C surface") {
  int32_t d_star = 0;
  Holder record;
  REQUIRE(nlqs_critical_depth(0.5, 1, 1.0, &d_star, &record.text) == NLQS_OK);
  CHECK(d_star == 5);
  CHECK(record.str().find("\"d_star\":5") != std::string::npos);
  CHECK(nlqs_critical_depth(1.5, 1, 1.0, &d_star, nullptr) ==
        NLQS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("guard configuration") {
  int dense = 0;
  int statevector = 0;
  nlqs_get_guards(&dense, &statevector);
  CHECK(dense >= 1);
  nlqs_set_guards(10, -1);
  int dense_after = 0;
  nlqs_get_guards(&dense_after, nullptr);
  CHECK(dense_after == 10);
  nlqs_set_guards(dense, statevector);
}

TEST_CASE("two-dimensional verify family through the C surface") {
  const int32_t depths[] = {1};
  const double ps[] = {0.3};
  nlqs_verify_request request{};
  request.family = "2d-haar";
  request.n = 4;  // 2x2 grid
  request.depths = depths;
  request.depth_count = 1;
  request.ps = ps;
  request.p_count = 1;
  request.seeds = 2;
  request.width = 1;
  Holder records;
  int64_t checks = 0;
  int64_t failures = 0;
  REQUIRE(nlqs_verify(&request, &records.text, &checks, &failures) == NLQS_OK);
  CHECK(checks > 0);
  CHECK(failures == 0);

  // Non-square qubit counts are rejected for the 2d family.
  request.n = 5;
  CHECK(nlqs_verify(&request, &records.text, &checks, &failures) ==
        NLQS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("small verify run through the C surface") {
  const int32_t depths[] = {1, 2};
  const double ps[] = {0.3};
  nlqs_verify_request request{};
  request.family = "1d-haar";
  request.n = 4;
  request.depths = depths;
  request.depth_count = 2;
  request.ps = ps;
  request.p_count = 1;
  request.seeds = 2;
  request.seed0 = 0;
  request.width = 2;
  Holder records;
  int64_t checks = 0;
  int64_t failures = 0;
  REQUIRE(nlqs_verify(&request, &records.text, &checks, &failures) == NLQS_OK);
  CHECK(checks > 0);
  CHECK(failures == 0);
  CHECK(records.str().find("\"record\":\"verify_summary\"") !=
        std::string::npos);
  // Identical requests produce byte-identical records.
  Holder again;
  REQUIRE(nlqs_verify(&request, &again.text, &checks, &failures) == NLQS_OK);
  CHECK(records.str() == again.str());
}
