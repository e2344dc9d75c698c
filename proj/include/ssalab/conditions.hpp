// conditions.hpp — eigenvalue-relation checkers: the four majorization
// relations between reduced spectra, the rank condition, the abstract
// feasibility conditions on spectra tuples, and the entropy-inequality gaps.

#pragma once

#include <array>
#include <optional>

#include "ssalab/spectra.hpp"
#include "ssalab/tensor.hpp"

namespace ssalab {

// --------------------------------------------------------------------- tuple

/// Four normalized ascending vectors with the shapes of the spectra of a
/// tripartite state and its AB, BC and B reductions.
class SpectraTuple {
 public:
  static SpectraTuple make(Spectrum abc, Spectrum ab, Spectrum bc, Spectrum b,
                           TripartiteDims dims);

  const Spectrum& abc() const { return abc_; }
  const Spectrum& ab() const { return ab_; }
  const Spectrum& bc() const { return bc_; }
  const Spectrum& b() const { return b_; }
  const TripartiteDims& dims() const { return dims_; }

 private:
  SpectraTuple(Spectrum abc, Spectrum ab, Spectrum bc, Spectrum b,
               TripartiteDims dims)
      : abc_(std::move(abc)), ab_(std::move(ab)), bc_(std::move(bc)),
        b_(std::move(b)), dims_(dims) {}

  Spectrum abc_, ab_, bc_, b_;
  TripartiteDims dims_;
};

/// Extracts the four reduced spectra of a full tripartite state.
SpectraTuple spectra_tuple_of(const DensityMatrix& rho);

// ------------------------------------------------------------------- reports

struct Lemma1Report {
  // Relation order: ABC-blocks vs AB, ABC-blocks vs BC, BC-blocks vs B,
  // AB-blocks vs B. The subsystem spectrum sits on the majorized side.
  std::array<MajorizationResult, 4> relations;

  bool all_hold() const;
  double min_margin() const;
};

struct Lemma2Report {
  bool applicable = false;       // zero-count coupling and N*r <= L*s both met
  bool conclusion_holds = false; // t <= floor((r-1)/L) + 1, floor reading
  int r = 0;                     // zero count of the AB spectrum
  int s = 0;                     // zero count of the BC spectrum
  int t = 0;                     // zero count of the B spectrum
  int ls_count = 0;              // zero count of the ABC spectrum
  int bound = 0;                 // the right-hand side of the conclusion
};

struct Condition4Result {
  bool applicable = false;  // at least one orientation's hypothesis is met
  bool holds = true;        // all applicable orientations satisfied
  double margin = 0.0;      // min over applicable orientations of
                            // (zeros_b - required zeros); 0 when vacuous
  int zeros_abc = 0, zeros_ab = 0, zeros_bc = 0, zeros_b = 0;
};

struct TheoremReport {
  MajorizationResult cond1;     // ABC-blocks(N) majorize AB
  MajorizationResult cond2;     // ABC-blocks(L) majorize BC
  MajorizationResult cond3_bc;  // BC-blocks(N) majorize B
  MajorizationResult cond3_ab;  // AB-blocks(L) majorize B
  Condition4Result cond4;

  bool cond3_holds() const { return cond3_bc.holds && cond3_ab.holds; }
  double cond3_margin() const {
    return std::min(cond3_bc.min_margin, cond3_ab.min_margin);
  }
  bool all_hold() const {
    return cond1.holds && cond2.holds && cond3_holds() && cond4.holds;
  }
};

/// Aggregate pass/fail record for one state.
struct ConditionReport {
  Lemma1Report lemma1;
  Lemma2Report lemma2;
  TheoremReport theorem_conditions;
  double ssa_gap = 0.0;
  std::optional<double> subadd_gap;  // only for bipartite states
};

// ---------------------------------------------------------------- operations

/// The four majorization relations between the reduced spectra of rho.
Lemma1Report check_lemma1(const DensityMatrix& rho,
                          double tol = kMajorizationTol);

/// Zero-count rank condition. Writes the zero counts of all four reduced
/// spectra; applicable when the ABC count equals L*s and N*r <= L*s. An
/// unmet hypothesis is a valid vacuous outcome, reported explicitly.
Lemma2Report check_lemma2(const DensityMatrix& rho,
                          double threshold = kRankThreshold);

/// Minimum zero count required of the B vector when the AB vector has r
/// zeros: 0 for r = 0, floor((r-1)/L) + 1 otherwise (equals ceil(r/L)).
int required_b_zeros(int r, int l);

/// The abstract feasibility conditions on a spectra tuple. Conditions 1-3
/// are the majorizations of Lemma 1 restated on abstract vectors; condition
/// 4 couples the zero counts (both orientations, each gated on its
/// hypothesis).
TheoremReport check_theorem_conditions(const SpectraTuple& tuple,
                                       double tol = kMajorizationTol,
                                       double rank_threshold = kRankThreshold);

/// S(rho_AB) + S(rho_BC) - S(rho_ABC) - S(rho_B), in nats; never clamped.
double ssa_gap(const DensityMatrix& rho);

/// S(rho_X) + S(rho_Y) - S(rho_XY) for a state with exactly two nontrivial
/// factors (a (L, M, 1) embedding or a reduced two-subsystem state).
double subadditivity_gap(const DensityMatrix& rho);

/// Runs every checker applicable to rho and assembles the record.
ConditionReport make_condition_report(const DensityMatrix& rho,
                                      double tol = kMajorizationTol,
                                      double threshold = kRankThreshold);

}  // namespace ssalab
