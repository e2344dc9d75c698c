#include "ssalab/conditions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ssalab {

SpectraTuple SpectraTuple::make(Spectrum abc, Spectrum ab, Spectrum bc,
                                Spectrum b, TripartiteDims dims) {
  validate(dims);
  auto expect = [](const Spectrum& s, int len, const char* name) {
    if (s.size() != len) {
      std::ostringstream msg;
      msg << "spectra tuple: " << name << " has length " << s.size()
          << ", expected " << len;
      throw std::invalid_argument(msg.str());
    }
  };
  expect(abc, dims.total(), "abc");
  expect(ab, dims.l * dims.m, "ab");
  expect(bc, dims.m * dims.n, "bc");
  expect(b, dims.m, "b");
  return SpectraTuple(std::move(abc), std::move(ab), std::move(bc),
                      std::move(b), dims);
}

SpectraTuple spectra_tuple_of(const DensityMatrix& rho) {
  if (rho.support() != Subsystems::ABC)
    throw std::invalid_argument("spectra tuple: full tripartite state required");
  return SpectraTuple::make(spectrum_of(rho),
                            spectrum_of(partial_trace(rho, Subsystems::AB)),
                            spectrum_of(partial_trace(rho, Subsystems::BC)),
                            spectrum_of(partial_trace(rho, Subsystems::B)),
                            rho.dims());
}

bool Lemma1Report::all_hold() const {
  return relations[0].holds && relations[1].holds && relations[2].holds &&
         relations[3].holds;
}

double Lemma1Report::min_margin() const {
  double m = relations[0].min_margin;
  for (int i = 1; i < 4; ++i) m = std::min(m, relations[i].min_margin);
  return m;
}

Lemma1Report check_lemma1(const DensityMatrix& rho, double tol) {
  const SpectraTuple t = spectra_tuple_of(rho);
  const auto& dims = t.dims();
  Lemma1Report report;
  report.relations[0] =
      majorized_by(t.ab().values(), aggregate(t.abc(), dims.n).values, tol);
  report.relations[1] =
      majorized_by(t.bc().values(), aggregate(t.abc(), dims.l).values, tol);
  report.relations[2] =
      majorized_by(t.b().values(), aggregate(t.bc(), dims.n).values, tol);
  report.relations[3] =
      majorized_by(t.b().values(), aggregate(t.ab(), dims.l).values, tol);
  return report;
}

int required_b_zeros(int r, int l) {
  if (r < 0) throw std::invalid_argument("required_b_zeros: negative r");
  if (l < 1) throw std::invalid_argument("required_b_zeros: l must be >= 1");
  if (r == 0) return 0;
  return (r - 1) / l + 1;  // floor of a nonnegative quotient, then +1
}

namespace {

// floor((r-1)/l) + 1 extended to r = 0, where it evaluates to 0.
int lemma2_bound(int r, int l) { return required_b_zeros(r, l); }

}  // namespace

Lemma2Report check_lemma2(const DensityMatrix& rho, double threshold) {
  const SpectraTuple t = spectra_tuple_of(rho);
  const auto& dims = t.dims();
  Lemma2Report report;
  report.ls_count = numerical_rank(t.abc(), threshold).zero_count;
  report.s = numerical_rank(t.bc(), threshold).zero_count;
  report.r = numerical_rank(t.ab(), threshold).zero_count;
  report.t = numerical_rank(t.b(), threshold).zero_count;
  report.bound = lemma2_bound(report.r, dims.l);
  report.applicable = (report.ls_count == dims.l * report.s) &&
                      (dims.n * report.r <= dims.l * report.s);
  report.conclusion_holds = report.applicable && report.t <= report.bound;
  return report;
}

TheoremReport check_theorem_conditions(const SpectraTuple& tuple, double tol,
                                       double rank_threshold) {
  const auto& dims = tuple.dims();
  TheoremReport report;
  report.cond1 = majorized_by(tuple.ab().values(),
                              aggregate(tuple.abc(), dims.n).values, tol);
  report.cond2 = majorized_by(tuple.bc().values(),
                              aggregate(tuple.abc(), dims.l).values, tol);
  report.cond3_bc = majorized_by(tuple.b().values(),
                                 aggregate(tuple.bc(), dims.n).values, tol);
  report.cond3_ab = majorized_by(tuple.b().values(),
                                 aggregate(tuple.ab(), dims.l).values, tol);

  Condition4Result& c4 = report.cond4;
  c4.zeros_abc = numerical_rank(tuple.abc(), rank_threshold).zero_count;
  c4.zeros_ab = numerical_rank(tuple.ab(), rank_threshold).zero_count;
  c4.zeros_bc = numerical_rank(tuple.bc(), rank_threshold).zero_count;
  c4.zeros_b = numerical_rank(tuple.b(), rank_threshold).zero_count;

  c4.applicable = false;
  c4.holds = true;
  bool margin_set = false;
  // Primary orientation: the ABC zero count couples to BC through factor L,
  // and the AB zero count demands zeros of B.
  if (c4.zeros_abc == dims.l * c4.zeros_bc) {
    const int need = required_b_zeros(c4.zeros_ab, dims.l);
    const double margin = static_cast<double>(c4.zeros_b - need);
    c4.applicable = true;
    c4.holds = c4.holds && c4.zeros_b >= need;
    c4.margin = margin_set ? std::min(c4.margin, margin) : margin;
    margin_set = true;
  }
  // Exchanged orientation: AB and BC swap roles, L and N swap.
  if (c4.zeros_abc == dims.n * c4.zeros_ab) {
    const int need = required_b_zeros(c4.zeros_bc, dims.n);
    const double margin = static_cast<double>(c4.zeros_b - need);
    c4.applicable = true;
    c4.holds = c4.holds && c4.zeros_b >= need;
    c4.margin = margin_set ? std::min(c4.margin, margin) : margin;
    margin_set = true;
  }
  return report;
}

double ssa_gap(const DensityMatrix& rho) {
  const SpectraTuple t = spectra_tuple_of(rho);
  return entropy(t.ab()) + entropy(t.bc()) - entropy(t.abc()) - entropy(t.b());
}

double subadditivity_gap(const DensityMatrix& rho) {
  // Accept a reduced two-subsystem state, or a full state with exactly one
  // nontrivial pair of factors (an (L, M, 1)-style embedding).
  std::vector<Subsystems> parts;
  for (Subsystems s : {Subsystems::A, Subsystems::B, Subsystems::C})
    if (contains(rho.support(), s)) parts.push_back(s);

  if (parts.size() == 3) {
    std::vector<Subsystems> nontrivial;
    for (Subsystems s : parts)
      if (rho.dims().dim_of(s) > 1) nontrivial.push_back(s);
    if (nontrivial.size() > 2)
      throw std::invalid_argument(
          "subadditivity_gap: state must be bipartite (at most two "
          "nontrivial factors)");
    while (nontrivial.size() < 2) {
      for (Subsystems s : parts) {
        if (std::find(nontrivial.begin(), nontrivial.end(), s) ==
            nontrivial.end()) {
          nontrivial.push_back(s);
          break;
        }
      }
    }
    std::sort(nontrivial.begin(), nontrivial.end(),
              [](Subsystems a, Subsystems b) {
                return static_cast<unsigned>(a) < static_cast<unsigned>(b);
              });
    parts = nontrivial;
  } else if (parts.size() != 2) {
    throw std::invalid_argument(
        "subadditivity_gap: state must cover exactly two subsystems");
  }

  const DensityMatrix joint =
      (subsystem_count(rho.support()) == 2)
          ? rho
          : partial_trace(rho, parts[0] | parts[1]);
  const double s_first = entropy(spectrum_of(partial_trace(joint, parts[0])));
  const double s_second = entropy(spectrum_of(partial_trace(joint, parts[1])));
  return s_first + s_second - entropy(spectrum_of(joint));
}

ConditionReport make_condition_report(const DensityMatrix& rho, double tol,
                                      double threshold) {
  ConditionReport report;
  report.lemma1 = check_lemma1(rho, tol);
  report.lemma2 = check_lemma2(rho, threshold);
  report.theorem_conditions =
      check_theorem_conditions(spectra_tuple_of(rho), tol, threshold);
  report.ssa_gap = ssa_gap(rho);
  const int nontrivial = (rho.dims().l > 1) + (rho.dims().m > 1) +
                         (rho.dims().n > 1);
  if (rho.support() == Subsystems::ABC && nontrivial <= 2 &&
      rho.dims().n == 1) {
    report.subadd_gap = subadditivity_gap(rho);
  }
  return report;
}

}  // namespace ssalab
