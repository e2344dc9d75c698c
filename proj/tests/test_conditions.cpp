#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssalab/conditions.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/stategen.hpp"

using namespace ssalab;

namespace {

DensityMatrix ginibre(TripartiteDims dims, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.dims = dims;
  spec.kind = StateKind::GinibreFull;
  spec.seed = seed;
  return generate(spec);
}

DensityMatrix named(TripartiteDims dims, StateKind kind) {
  GeneratorSpec spec;
  spec.dims = dims;
  spec.kind = kind;
  return generate(spec);
}

DensityMatrix maximally_mixed(TripartiteDims dims) {
  const int d = dims.total();
  return DensityMatrix::make(ComplexMatrix::Identity(d, d) / d, dims);
}

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

TEST_CASE("lemma 1 on the maximally mixed state: equality everywhere") {
  const Lemma1Report report = check_lemma1(maximally_mixed({2, 2, 2}));
  CHECK(report.all_hold());
  for (const auto& rel : report.relations)
    CHECK(std::abs(rel.min_margin) <= 1e-12);
}

TEST_CASE("lemma 1 on a pure product state") {
  GeneratorSpec spec;
  spec.dims = {2, 2, 2};
  spec.kind = StateKind::Product;
  spec.seed = 1;
  spec.factors = {{FactorSpec::Kind::PureRandom, 0},
                  {FactorSpec::Kind::PureRandom, 0},
                  {FactorSpec::Kind::PureRandom, 0}};
  const Lemma1Report report = check_lemma1(generate(spec));
  CHECK(report.all_hold());
}

TEST_CASE("lemma 1 holds across random states") {
  // Brute-force sweep via the eigensolver; the empirical form of the claim.
  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 3, 2},
                              TripartiteDims{3, 2, 4}}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const Lemma1Report report = check_lemma1(ginibre(dims, seed));
      REQUIRE(report.all_hold());
      CHECK(report.min_margin() >= -1e-9);
    }
  }
}

TEST_CASE("lemma 1 covers low-rank and pure states too") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorSpec spec;
    spec.dims = {2, 2, 2};
    spec.kind = StateKind::GinibreRank;
    spec.rank = 1 + static_cast<int>(seed % 4);
    spec.seed = seed;
    CHECK(check_lemma1(generate(spec)).all_hold());
  }
}

TEST_CASE("required_b_zeros matches an independent ceiling computation") {
  CHECK(required_b_zeros(0, 2) == 0);
  CHECK(required_b_zeros(2, 2) == 1);  // r = L
  CHECK(required_b_zeros(3, 2) == 2);  // r = L + 1, floor reading
  for (int l = 1; l <= 6; ++l) {
    for (int r = 1; r <= 10 * l; ++r) {
      const int ceiling = (r + l - 1) / l;  // independent ceil(r/l)
      CHECK(required_b_zeros(r, l) == ceiling);
    }
  }
  CHECK_THROWS_AS(required_b_zeros(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(required_b_zeros(1, 0), std::invalid_argument);
}

TEST_CASE("lemma 2 on full-rank states is applicable and vacuously tight") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Lemma2Report report = check_lemma2(ginibre({2, 2, 2}, seed));
    REQUIRE(report.applicable);
    CHECK(report.r == 0);
    CHECK(report.s == 0);
    CHECK(report.t == 0);
    CHECK(report.conclusion_holds);
  }
}

TEST_CASE("lemma 2 on constructed rank-deficient states") {
  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 2, 3}}) {
    const int bc_dim = dims.m * dims.n;
    for (int s = 0; s <= 2 && s < bc_dim; ++s) {
      GeneratorSpec spec;
      spec.dims = dims;
      spec.kind = StateKind::Lemma2Construct;
      spec.zeros = s;
      spec.seed = 7 + static_cast<std::uint64_t>(s);
      const Lemma2Report report = check_lemma2(generate(spec));
      CHECK(report.s == s);
      CHECK(report.ls_count == dims.l * s);
      REQUIRE(report.applicable);
      CHECK(report.conclusion_holds);
    }
  }
}

TEST_CASE("lemma 2 hypothesis gate reports inapplicable states") {
  // A pure entangled state: ls_count = 7 while L*s = 4.
  const Lemma2Report report = check_lemma2(named({2, 2, 2}, StateKind::Ghz));
  CHECK_FALSE(report.applicable);
  CHECK_FALSE(report.conclusion_holds);
  CHECK(report.ls_count == 7);
  CHECK(report.s == 2);
}

TEST_CASE("theorem conditions on the all-uniform tuple") {
  const TripartiteDims dims{2, 2, 2};
  const SpectraTuple tuple = SpectraTuple::make(
      Spectrum::uniform(8, SpectrumLabel::ABC),
      Spectrum::uniform(4, SpectrumLabel::AB),
      Spectrum::uniform(4, SpectrumLabel::BC),
      Spectrum::uniform(2, SpectrumLabel::B), dims);
  const TheoremReport report = check_theorem_conditions(tuple);
  CHECK(report.all_hold());
  CHECK(report.cond4.applicable);
  CHECK(std::abs(report.cond1.min_margin) <= 1e-12);
}

TEST_CASE("theorem conditions 1-3 match lemma 1 on extracted tuples") {
  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 3, 2}}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityMatrix rho = ginibre(dims, seed);
      const Lemma1Report l1 = check_lemma1(rho);
      const TheoremReport th = check_theorem_conditions(spectra_tuple_of(rho));
      CHECK(th.cond1.holds == l1.relations[0].holds);
      CHECK(th.cond2.holds == l1.relations[1].holds);
      CHECK(th.cond3_bc.holds == l1.relations[2].holds);
      CHECK(th.cond3_ab.holds == l1.relations[3].holds);
      CHECK(std::abs(th.cond1.min_margin - l1.relations[0].min_margin) <=
            1e-12);
      CHECK(std::abs(th.cond2.min_margin - l1.relations[1].min_margin) <=
            1e-12);
      CHECK(std::abs(th.cond3_margin() -
                     std::min(l1.relations[2].min_margin,
                              l1.relations[3].min_margin)) <= 1e-12);
      CHECK(th.cond1.holds);
      CHECK(th.cond2.holds);
      CHECK(th.cond3_holds());
    }
  }
}

TEST_CASE("constructed violation of condition 1") {
  const TripartiteDims dims{2, 2, 2};
  const SpectraTuple tuple = SpectraTuple::make(
      Spectrum::uniform(8, SpectrumLabel::ABC),
      Spectrum::make({0.0, 0.0, 0.0, 1.0}, SpectrumLabel::AB),
      Spectrum::uniform(4, SpectrumLabel::BC),
      Spectrum::uniform(2, SpectrumLabel::B), dims);
  const TheoremReport report = check_theorem_conditions(tuple);
  CHECK_FALSE(report.cond1.holds);
  CHECK(report.cond1.min_margin == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("condition 4 gates on its hypothesis") {
  const TripartiteDims dims{2, 2, 2};
  // zeros: abc=6, bc=3 couple (6 == 2*3); ab=2 demands one zero of b, which
  // is present.
  const SpectraTuple good = SpectraTuple::make(
      Spectrum::make({0, 0, 0, 0, 0, 0, 0.5, 0.5}, SpectrumLabel::ABC),
      Spectrum::make({0, 0, 0.25, 0.75}, SpectrumLabel::AB),
      Spectrum::make({0, 0, 0, 1.0}, SpectrumLabel::BC),
      Spectrum::make({0, 1.0}, SpectrumLabel::B), dims);
  const TheoremReport g = check_theorem_conditions(good);
  CHECK(g.cond4.applicable);
  CHECK(g.cond4.holds);

  // Same zero structure but the required B zero is missing.
  const SpectraTuple bad = SpectraTuple::make(
      Spectrum::make({0, 0, 0, 0, 0, 0, 0.5, 0.5}, SpectrumLabel::ABC),
      Spectrum::make({0, 0, 0.25, 0.75}, SpectrumLabel::AB),
      Spectrum::make({0, 0, 0, 1.0}, SpectrumLabel::BC),
      Spectrum::make({0.4, 0.6}, SpectrumLabel::B), dims);
  const TheoremReport b = check_theorem_conditions(bad);
  CHECK(b.cond4.applicable);
  CHECK_FALSE(b.cond4.holds);
  CHECK(b.cond4.margin == doctest::Approx(-1.0));

  // Uncoupled zero counts: hypothesis unmet in both orientations, reported
  // not applicable rather than failed.
  const TheoremReport v =
      check_theorem_conditions(spectra_tuple_of(named(dims, StateKind::Ghz)));
  CHECK_FALSE(v.cond4.applicable);
  CHECK(v.cond4.holds);
}

TEST_CASE("ssa gap examples") {
  CHECK(ssa_gap(maximally_mixed({2, 2, 2})) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK(ssa_gap(named({2, 2, 2}, StateKind::Ghz)) ==
        doctest::Approx(kLn2).epsilon(1e-12));

  // For a pure global state the gap reduces to the entropy of one part:
  // here the (1/3, 2/3) marginal.
  const double w_expected = -std::log(1.0 / 3.0) / 3.0 - 2.0 * std::log(2.0 / 3.0) / 3.0;
  CHECK(w_expected == doctest::Approx(0.6365141682948128).epsilon(1e-12));
  CHECK(ssa_gap(named({2, 2, 2}, StateKind::W)) ==
        doctest::Approx(w_expected).epsilon(1e-11));
}

TEST_CASE("ssa gap is nonnegative across random states") {
  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 3, 2},
                              TripartiteDims{3, 2, 4}}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed)
      CHECK(ssa_gap(ginibre(dims, seed)) >= -1e-9);
  }
}

TEST_CASE("subadditivity gap examples") {
  const TripartiteDims bip{2, 3, 1};

  GeneratorSpec prod;
  prod.dims = bip;
  prod.kind = StateKind::Product;
  prod.seed = 4;
  prod.factors = {{FactorSpec::Kind::GinibreFull, 0},
                  {FactorSpec::Kind::GinibreFull, 0},
                  {FactorSpec::Kind::Mixed, 0}};
  CHECK(std::abs(subadditivity_gap(generate(prod))) <= 1e-12);

  // Maximally entangled two-qubit pure state embedded as (2, 2, 1):
  // |00> + |11> over the A,B factors sits at indices 0 and 3.
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const DensityMatrix rho = DensityMatrix::make(bell, {2, 2, 1});
  CHECK(subadditivity_gap(rho) == doctest::Approx(2.0 * kLn2).epsilon(1e-12));

  // Also accepts reduced two-subsystem states.
  const DensityMatrix ghz_ab =
      partial_trace(named({2, 2, 2}, StateKind::Ghz), Subsystems::AB);
  CHECK(subadditivity_gap(ghz_ab) == doctest::Approx(kLn2).epsilon(1e-12));

  // Tripartite states with three nontrivial factors are rejected.
  CHECK_THROWS_AS(subadditivity_gap(maximally_mixed({2, 2, 2})),
                  std::invalid_argument);
}

TEST_CASE("subadditivity gap is nonnegative across random bipartite states") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CHECK(subadditivity_gap(ginibre({2, 3, 1}, seed)) >= -1e-9);
    CHECK(subadditivity_gap(ginibre({3, 3, 1}, seed + 5000)) >= -1e-9);
  }
}

TEST_CASE("full condition report carries the subadditivity gap only for "
          "bipartite states") {
  const ConditionReport bip = make_condition_report(ginibre({2, 2, 1}, 3));
  CHECK(bip.subadd_gap.has_value());
  const ConditionReport tri = make_condition_report(ginibre({2, 2, 2}, 3));
  CHECK_FALSE(tri.subadd_gap.has_value());
}
