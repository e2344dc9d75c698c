// stategen.hpp — deterministic generation of random and named density
// matrices for property sweeps. A (spec, seed) pair fully determines the
// output, bit for bit, so any corpus can be replayed from its seed schedule.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssalab/tensor.hpp"

namespace ssalab {

enum class StateKind {
  GinibreFull,     // G G^dag / tr with G square complex gaussian
  GinibreRank,     // G is (LMN) x k: rank-k states
  PureRandom,      // normalized gaussian vector's projector
  Ghz,             // (|000> + |111>)/sqrt(2), dims (2,2,2) only
  W,               // (|001> + |010> + |100>)/sqrt(3), dims (2,2,2) only
  Product,         // tensor product of independently generated factors
  Lemma2Construct, // rho_A (x) rho_BC, diagonal, with s exact zeros in rho_BC
};

std::string to_string(StateKind kind);
StateKind state_kind_from_string(const std::string& text);

/// One tensor factor of a product state.
struct FactorSpec {
  enum class Kind { GinibreFull, GinibreRank, PureRandom, Mixed };
  Kind kind = Kind::GinibreFull;
  int rank = 0;  // GinibreRank only
};

struct GeneratorSpec {
  TripartiteDims dims;
  StateKind kind = StateKind::GinibreFull;
  std::uint64_t seed = 0;
  int rank = 0;                     // GinibreRank
  int zeros = 0;                    // Lemma2Construct: s
  std::vector<FactorSpec> factors;  // Product: exactly three, for A, B, C

  /// Parses the JSON form, e.g. {"dims":[2,2,2],"kind":"ginibre_full","seed":7}.
  static GeneratorSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Deterministically generates the state described by `spec`.
/// Rejects ghz/w away from dims (2,2,2) and out-of-range rank or zero counts.
DensityMatrix generate(const GeneratorSpec& spec);

}  // namespace ssalab
