#include "doctest.h"

#include "vixify/hash.hpp"
#include "vixify/vdf.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

using namespace vixify;
using namespace vixify::vdf;

namespace {

VdfParams tiny(uint64_t p) {
  VdfParams params;
  params.modulus = p;
  params.bit_length = 0;
  while ((BigInt(1) << params.bit_length) <= params.modulus) params.bit_length++;
  return params;
}

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

TEST_CASE("forward round is a bijection on every small field") {
  for (uint64_t p : {7ull, 23ull, 443ull, 1019ull, 65027ull}) {
    VdfParams params = tiny(p);
    std::set<uint64_t> images;
    for (uint64_t x = 0; x < p; ++x) {
      BigInt y = round_forward(params, BigInt(x));
      CHECK(y >= 0);
      CHECK(y < p);
      images.insert(y.convert_to<uint64_t>());
      // backward inverts forward pointwise
      CHECK(round_backward(params, y) == x);
    }
    CHECK(images.size() == p);  // surjective, hence bijective
  }
}

TEST_CASE("frozen tiny trace") {
  // p = 23, x0 = 5: flip -> 4, sqrt: 4^6 mod 23 = 2, 2^2 = 4 is a residue,
  // 2 is even, so one round of 5 is 2.
  VdfParams params = tiny(23);
  CHECK(round_forward(params, BigInt(5)) == 2);
  CHECK(round_backward(params, BigInt(2)) == 5);
  VdfProof proof;
  proof.input = 5;
  proof.steps = 1;
  proof.output = 2;
  // feed the raw field element through an input that reduces to 5
  Bytes five{0x05};
  CHECK(reduce_input(params, five) == 5);
  CHECK(vdf_eval(params, five, 1).output == 2);
  CHECK(vdf_verify(params, five, proof));
}

TEST_CASE("setup is deterministic and produces p = 3 mod 4") {
  VdfParams a = vdf_setup(64, Bytes{'s'});
  VdfParams b = vdf_setup(64, Bytes{'s'});
  VdfParams c = vdf_setup(64, Bytes{'t'});
  CHECK(a.modulus == b.modulus);
  CHECK(a.modulus != c.modulus);
  CHECK(a.bit_length == 64);
  CHECK(a.modulus % 4 == 3);
  CHECK((a.modulus >> 63) == 1);  // top bit set: full advertised size
  CHECK_THROWS_AS(vdf_setup(8, Bytes{}), std::invalid_argument);
}

TEST_CASE("small setups are actually prime") {
  // trial division is feasible at 20 bits and cross-checks the prime scan
  VdfParams params = vdf_setup(20, Bytes{'p'});
  uint64_t p = params.modulus.convert_to<uint64_t>();
  CHECK(p % 4 == 3);
  for (uint64_t d = 2; d * d <= p; ++d) CHECK(p % d != 0);
}

TEST_CASE("eval verify round trip at 64 bits") {
  VdfParams params = vdf_setup(64, Bytes{'e'});
  Bytes input{'a', 'b', 'c'};
  VdfProof proof = vdf_eval(params, input, 1000);
  CHECK(proof.steps == 1000);
  CHECK(proof.input == reduce_input(params, input));
  CHECK(vdf_verify(params, input, proof));

  SUBCASE("wrong step count rejects") {
    VdfProof bad = proof;
    bad.steps = 999;
    CHECK_FALSE(vdf_verify(params, input, bad));
    bad.steps = 1001;
    CHECK_FALSE(vdf_verify(params, input, bad));
  }
  SUBCASE("wrong output rejects") {
    VdfProof bad = proof;
    bad.output = (bad.output + 1) % params.modulus;
    CHECK_FALSE(vdf_verify(params, input, bad));
  }
  SUBCASE("wrong input rejects") {
    CHECK_FALSE(vdf_verify(params, Bytes{'a', 'b', 'd'}, proof));
    VdfProof bad = proof;
    bad.input = (bad.input + 1) % params.modulus;
    CHECK_FALSE(vdf_verify(params, input, bad));
  }
  SUBCASE("out-of-field values reject without throwing") {
    VdfProof bad = proof;
    bad.output = params.modulus;  // not reduced
    CHECK_FALSE(vdf_verify(params, input, bad));
    bad = proof;
    bad.output = -1;
    CHECK_FALSE(vdf_verify(params, input, bad));
  }
}

TEST_CASE("distinct inputs give distinct outputs") {
  VdfParams params = vdf_setup(64, Bytes{'i'});
  std::set<Bytes> outputs;
  for (int i = 0; i < 200; ++i) {
    Bytes input{static_cast<uint8_t>(i), 'x'};
    outputs.insert(bigint_to_bytes(vdf_eval(params, input, 50).output));
  }
  CHECK(outputs.size() == 200);  // rounds are bijective, eval is injective
}

TEST_CASE("zero steps is the reduced input") {
  VdfParams params = vdf_setup(64, Bytes{'z'});
  Bytes input{'q'};
  VdfProof proof = vdf_eval(params, input, 0);
  CHECK(proof.output == reduce_input(params, input));
  CHECK(vdf_verify(params, input, proof));
}

TEST_CASE("cancellation aborts evaluation") {
  VdfParams params = vdf_setup(128, Bytes{'c'});
  std::atomic<bool> cancel{true};
  CHECK_THROWS_AS(vdf_eval(params, Bytes{'x'}, 1u << 22, &cancel), Cancelled);
}

TEST_CASE("evaluation time grows linearly in steps") {
  VdfParams params = vdf_setup(64, Bytes{'l'});
  std::vector<uint64_t> steps{4096, 8192, 16384, 32768};
  std::vector<double> ms;
  for (uint64_t s : steps) {
    double t0 = now_ms();
    vdf_eval(params, Bytes{'t'}, s);
    ms.push_back(now_ms() - t0);
  }
  // least-squares fit ms = a + b*steps; demand an overwhelmingly linear fit
  double n = steps.size(), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < steps.size(); ++i) {
    double x = static_cast<double>(steps[i]);
    sx += x; sy += ms[i]; sxx += x * x; sxy += x * ms[i]; syy += ms[i] * ms[i];
  }
  double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double r_num = n * sxy - sx * sy;
  double r_den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  double r2 = (r_num / r_den) * (r_num / r_den);
  CHECK(b > 0);
  CHECK(r2 > 0.98);
}

TEST_CASE("verification is much cheaper than evaluation") {
  VdfParams params = vdf_setup(128, Bytes{'v'});
  Bytes input{'r', 'a', 't'};
  const uint64_t steps = 20000;
  double t0 = now_ms();
  VdfProof proof = vdf_eval(params, input, steps);
  double eval_ms = now_ms() - t0;
  t0 = now_ms();
  bool ok = vdf_verify(params, input, proof);
  double verify_ms = now_ms() - t0;
  CHECK(ok);
  CHECK(eval_ms > verify_ms * 5);  // loose bound; the bench tool measures properly
}

TEST_CASE("abstract output is deterministic, in-field, and steps-sensitive") {
  VdfParams params = vdf_setup(64, Bytes{'a'});
  BigInt x = reduce_input(params, Bytes{'m'});
  BigInt y1 = abstract_output(params, x, 100);
  BigInt y2 = abstract_output(params, x, 100);
  BigInt y3 = abstract_output(params, x, 101);
  CHECK(y1 == y2);
  CHECK(y1 != y3);
  CHECK(y1 >= 0);
  CHECK(y1 < params.modulus);
  CHECK(abstract_output(params, (x + 1) % params.modulus, 100) != y1);
}
