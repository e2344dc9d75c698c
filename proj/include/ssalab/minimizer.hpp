// minimizer.hpp — numerical minimization of the entropy functional
//
//   F(t) = S(t.ab) + S(t.bc) - S(t.b) - S(t.abc)
//
// over spectra tuples constrained by the four feasibility conditions, with a
// rejection-sampling oracle as an independent check and a first-order
// perturbation identity for local verification.
//
// The zero structure (support pattern) is combinatorial, so it is fixed per
// run rather than penalized: each pattern defines a smooth feasible polytope
// cut out by ordering chains, normalization and majorization half-spaces,
// and the inner problem is continuous on it.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ssalab/conditions.hpp"

namespace ssalab {

inline constexpr double kFeasibilityTol = 1e-10;
inline constexpr double kConvergedResidual = 1e-6;
inline constexpr double kDescentImprovementTol = 1e-12;
inline constexpr int kMaxDescentIterations = 10000;
inline constexpr int kDefaultRestarts = 32;
inline constexpr long kDefaultSampleBudget = 100000;
inline constexpr long kDefaultOracleSamples = 100000;

// ------------------------------------------------------------------ patterns

/// Exact zero counts prescribed for the four vectors (zeros sit at the front
/// of each ascending vector).
struct SupportPattern {
  int zeros_abc = 0;
  int zeros_bc = 0;
  int zeros_ab = 0;
  int zeros_b = 0;

  bool operator==(const SupportPattern&) const = default;
};

/// Dims plus a support pattern consistent with the zero-count condition in
/// both orientations; the domain of one minimization run.
class FeasibleRegionSpec {
 public:
  /// Validates bounds (each count leaves at least one nonzero entry) and the
  /// condition-4 coupling wherever its hypothesis applies; throws
  /// std::invalid_argument otherwise.
  static FeasibleRegionSpec make(TripartiteDims dims, SupportPattern pattern,
                                 double tolerance = kMajorizationTol);

  const TripartiteDims& dims() const { return dims_; }
  const SupportPattern& pattern() const { return pattern_; }
  double tolerance() const { return tolerance_; }

 private:
  FeasibleRegionSpec(TripartiteDims dims, SupportPattern pattern, double tol)
      : dims_(dims), pattern_(pattern), tolerance_(tol) {}

  TripartiteDims dims_;
  SupportPattern pattern_;
  double tolerance_;
};

class SamplerFailure : public std::runtime_error {
 public:
  explicit SamplerFailure(const std::string& what) : std::runtime_error(what) {}
};

// ----------------------------------------------------------------- objective

/// S(ab) + S(bc) - S(b) - S(abc); equals the SSA gap when the tuple comes
/// from a real state.
double objective_f(const SpectraTuple& tuple);

// ------------------------------------------------------------------ sampling

/// Draws a tuple satisfying conditions 1-3 with nonnegative margins and the
/// exact zero pattern: sorted-exponential simplex points on each support,
/// rejected until the majorizations hold. Deterministic per seed; throws
/// SamplerFailure when `budget` joint draws are exhausted.
SpectraTuple sample_feasible(const FeasibleRegionSpec& spec, std::uint64_t seed,
                             long budget = kDefaultSampleBudget);

struct OracleScanResult {
  double min_f = 0.0;
  std::optional<SpectraTuple> argmin;
  long samples = 0;    // feasible tuples evaluated
  long attempts = 0;   // total joint draws behind them
};

/// Evaluates F on `samples` feasible tuples (plus any injected tuples, which
/// are scanned first) and returns the minimum observed value. This is the
/// independent oracle backing every minimization claim.
OracleScanResult oracle_scan(const FeasibleRegionSpec& spec, long samples,
                             std::uint64_t seed,
                             const std::vector<SpectraTuple>& injected = {});

// -------------------------------------------------------------- minimization

struct RestartStat {
  std::uint64_t seed = 0;
  double start_objective = 0.0;
  double objective = 0.0;
  double feasibility_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool sampler_failed = false;
};

struct MinimizationResult {
  std::optional<SpectraTuple> minimizer;  // absent when nothing converged
  double objective = 0.0;
  double feasibility_residual = 0.0;
  int restarts = 0;
  int converged_restarts = 0;
  double uniformity_deviation = 0.0;  // max relative spread of nonzero entries
  bool converged = false;
  std::vector<RestartStat> restart_stats;  // seed schedule and per-start data
};

/// Multi-start projected descent: from each sample_feasible start, steps
/// along the analytic gradient of F with backtracking halving, projecting
/// each iterate back onto the feasible polytope by cyclic alternating
/// projections (isotonic chains, normalization, majorization half-spaces,
/// frozen zeros). Returns the best local minimum across restarts; a run with
/// zero converged restarts reports non-convergence, never a fabricated
/// minimum.
MinimizationResult minimize_f(const FeasibleRegionSpec& spec,
                              int restarts = kDefaultRestarts,
                              std::uint64_t seed = 0);

/// Largest relative spread (max-min)/max over the nonzero entries of any of
/// the four vectors; 0 for tuples uniform on their supports.
double uniformity_deviation(const SpectraTuple& tuple,
                            double threshold = kRankThreshold);

/// The uniform-on-support tuple of a pattern (the natural feasible reference
/// point; its objective is exactly 0 for consistent patterns).
SpectraTuple uniform_tuple(const FeasibleRegionSpec& spec);

// -------------------------------------------------- first-order perturbation

/// Half-open index range [begin, end) of constant-valued entries.
struct SectionRef {
  int begin = 0;
  int end = 0;
  int length() const { return end - begin; }
};

/// Mass transfer: delta leaves each src section (spread uniformly over its
/// entries) and enters the paired dst section, simultaneously in the ABC, AB
/// and BC vectors. The B vector is untouched.
struct TransferSpec {
  SectionRef abc_src, abc_dst;
  SectionRef ab_src, ab_dst;
  SectionRef bc_src, bc_dst;
};

struct PerturbationDelta {
  double predicted = 0.0;  // delta * log of the six-section value ratio
  double direct = 0.0;     // exact F difference after applying the transfer
};

/// First-order prediction for the change of F under the section transfer,
/// next to an exact recomputation. Sections must be constant-valued and the
/// perturbed vectors must stay positive and ascending, else the transfer is
/// rejected.
PerturbationDelta perturbation_delta(const SpectraTuple& tuple,
                                     const TransferSpec& transfer,
                                     double delta);

/// A randomly generated tuple-with-transfer on which the perturbation
/// identity can be exercised across a delta ladder.
struct TransferConfig {
  SpectraTuple tuple;
  TransferSpec transfer;
  double max_delta = 0.0;  // largest admissible transfer mass
  double curvature = 0.0;  // analytic second-order coefficient
};

/// Piecewise-constant random tuples with two designated sections per vector,
/// screened so the second-order coefficient is bounded away from zero and
/// the standard delta ladder stays admissible.
TransferConfig random_transfer_config(const TripartiteDims& dims,
                                      std::uint64_t seed);

}  // namespace ssalab
