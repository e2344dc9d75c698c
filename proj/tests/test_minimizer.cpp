#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssalab/minimizer.hpp"
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

FeasibleRegionSpec full_support(TripartiteDims dims) {
  return FeasibleRegionSpec::make(dims, SupportPattern{0, 0, 0, 0});
}

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

TEST_CASE("objective of uniform tuples vanishes") {
  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 3, 2},
                              TripartiteDims{3, 2, 2}, TripartiteDims{2, 2, 3}}) {
    const SpectraTuple uniform = uniform_tuple(full_support(dims));
    CHECK(std::abs(objective_f(uniform)) <= 1e-12);
  }
}

TEST_CASE("objective equals the ssa gap on real states") {
  GeneratorSpec ghz;
  ghz.dims = {2, 2, 2};
  ghz.kind = StateKind::Ghz;
  const DensityMatrix rho = generate(ghz);
  CHECK(objective_f(spectra_tuple_of(rho)) ==
        doctest::Approx(kLn2).epsilon(1e-12));

  for (TripartiteDims dims : {TripartiteDims{2, 2, 2}, TripartiteDims{2, 3, 2}}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const DensityMatrix state = ginibre(dims, seed);
      CHECK(std::abs(objective_f(spectra_tuple_of(state)) - ssa_gap(state)) <=
            1e-12);
    }
  }
}

TEST_CASE("objective on a mixed-pure extreme tuple") {
  const TripartiteDims dims{2, 2, 2};
  std::vector<double> pure_abc(8, 0.0);
  pure_abc.back() = 1.0;
  const SpectraTuple tuple = SpectraTuple::make(
      Spectrum::make(pure_abc, SpectrumLabel::ABC),
      Spectrum::uniform(4, SpectrumLabel::AB),
      Spectrum::uniform(4, SpectrumLabel::BC),
      Spectrum::make({0.0, 1.0}, SpectrumLabel::B), dims);
  CHECK(objective_f(tuple) ==
        doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("feasible region validation") {
  const TripartiteDims dims{2, 2, 2};
  CHECK_NOTHROW(FeasibleRegionSpec::make(dims, {0, 0, 0, 0}));
  CHECK_NOTHROW(FeasibleRegionSpec::make(dims, {2, 1, 0, 0}));
  CHECK_NOTHROW(FeasibleRegionSpec::make(dims, {4, 2, 2, 1}));

  // r = L zeros in AB demand one zero of B under the coupled hypothesis.
  CHECK_THROWS_AS(FeasibleRegionSpec::make(dims, {4, 2, 2, 0}),
                  std::invalid_argument);
  // Zero counts may not exhaust a vector.
  CHECK_THROWS_AS(FeasibleRegionSpec::make(dims, {8, 0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FeasibleRegionSpec::make(dims, {0, 0, 0, 2}),
                  std::invalid_argument);
}

TEST_CASE("sample_feasible produces condition-satisfying tuples") {
  const FeasibleRegionSpec spec = full_support({2, 2, 2});
  // Interior prefix margins are nonnegative by construction; the final
  // margin is the total-mass difference and lands within rounding of zero.
  const auto interior_nonneg = [](const MajorizationResult& r) {
    for (size_t k = 0; k + 1 < r.margins.size(); ++k)
      if (r.margins[k] < 0.0) return false;
    return std::abs(r.margins.back()) <= 1e-12;
  };
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SpectraTuple tuple = sample_feasible(spec, seed);
    const TheoremReport report = check_theorem_conditions(tuple);
    REQUIRE(report.all_hold());
    CHECK(interior_nonneg(report.cond1));
    CHECK(interior_nonneg(report.cond2));
    CHECK(interior_nonneg(report.cond3_bc));
    CHECK(interior_nonneg(report.cond3_ab));
  }

  // Deterministic per seed.
  const SpectraTuple a = sample_feasible(spec, 42);
  const SpectraTuple b = sample_feasible(spec, 42);
  for (int i = 0; i < a.abc().size(); ++i)
    CHECK(a.abc()[i] == b.abc()[i]);
}

TEST_CASE("sample_feasible honors zero patterns") {
  const FeasibleRegionSpec spec =
      FeasibleRegionSpec::make({2, 2, 2}, {4, 2, 2, 1});
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SpectraTuple tuple = sample_feasible(spec, seed);
    CHECK(numerical_rank(tuple.abc()).zero_count == 4);
    CHECK(numerical_rank(tuple.bc()).zero_count == 2);
    CHECK(numerical_rank(tuple.ab()).zero_count == 2);
    CHECK(numerical_rank(tuple.b()).zero_count == 1);
    CHECK(check_theorem_conditions(tuple).all_hold());
  }
}

TEST_CASE("sampler failure is reported, not fabricated") {
  // zeros_ab = 2 forces the first two ABC blocks (four entries) to carry no
  // mass, but the pattern grants the ABC vector only two zeros, so interior
  // draws can never satisfy condition 1.
  const FeasibleRegionSpec spec =
      FeasibleRegionSpec::make({2, 2, 2}, {2, 1, 2, 1});
  CHECK_THROWS_AS(sample_feasible(spec, 1, 2000), SamplerFailure);
}

TEST_CASE("oracle scan basics") {
  const FeasibleRegionSpec spec = full_support({2, 2, 2});

  // Degenerate consistency: one sample returns that sample's objective.
  const OracleScanResult one = oracle_scan(spec, 1, 9);
  const SpectraTuple only = sample_feasible(spec, derive_seed(9, 0));
  CHECK(one.samples == 1);
  CHECK(one.min_f == doctest::Approx(objective_f(only)).epsilon(1e-15));

  // Injecting the uniform tuple bounds the minimum by F(uniform) = 0.
  const OracleScanResult with_uniform =
      oracle_scan(spec, 50, 9, {uniform_tuple(spec)});
  CHECK(with_uniform.min_f <= 1e-12);
}

TEST_CASE("minimizer descends below its starts and the oracle") {
  const FeasibleRegionSpec spec = full_support({2, 2, 2});
  const MinimizationResult result = minimize_f(spec, 6, 2024);
  REQUIRE(result.converged);
  REQUIRE(result.minimizer.has_value());
  CHECK(result.feasibility_residual <= kConvergedResidual);
  CHECK(std::abs(objective_f(*result.minimizer) - result.objective) <= 1e-10);

  for (const RestartStat& stat : result.restart_stats) {
    if (stat.sampler_failed) continue;
    CHECK(result.objective <= stat.start_objective + 1e-12);
    CHECK(stat.objective <= stat.start_objective + 1e-12);
  }

  const OracleScanResult oracle = oracle_scan(spec, 2000, 2024);
  CHECK(result.objective <= oracle.min_f + 1e-7);

  // The minimizer is feasible within the stated tolerance.
  const TheoremReport report = check_theorem_conditions(*result.minimizer);
  CHECK(report.cond1.min_margin >= -1e-9);
  CHECK(report.cond2.min_margin >= -1e-9);
  CHECK(report.cond3_margin() >= -1e-9);
}

TEST_CASE("a hand-built feasible tuple undercuts the uniform objective") {
  // All four vectors interior, all conditions satisfied with nonnegative
  // margins, objective strictly negative: the abstract feasible region
  // reaches below zero even though real states never do.
  const TripartiteDims dims{2, 2, 2};
  const SpectraTuple tuple = SpectraTuple::make(
      Spectrum::make({0.005, 0.005, 0.165, 0.165, 0.165, 0.165, 0.165, 0.165},
                     SpectrumLabel::ABC),
      Spectrum::make({0.01, 0.33, 0.33, 0.33}, SpectrumLabel::AB),
      Spectrum::make({0.01, 0.33, 0.33, 0.33}, SpectrumLabel::BC),
      Spectrum::make({0.5, 0.5}, SpectrumLabel::B), dims);

  const TheoremReport report = check_theorem_conditions(tuple);
  REQUIRE(report.all_hold());
  CHECK(report.cond1.min_margin >= -1e-15);
  CHECK(report.cond2.min_margin >= -1e-15);
  CHECK(report.cond3_margin() >= -1e-15);
  CHECK(report.cond4.applicable);

  // Hand computation: F = 2 S(ab) - ln 2 - S(abc).
  CHECK(objective_f(tuple) ==
        doctest::Approx(-0.2426666609836139).epsilon(1e-9));
}

TEST_CASE("minimize handles a pattern whose region is thin") {
  //  (6,3,2,1): bc and b are pinned to single-support vectors; sampling is
  //  easy and minimization drives ab toward purity.
  const FeasibleRegionSpec spec =
      FeasibleRegionSpec::make({2, 2, 2}, {6, 3, 2, 1});
  const MinimizationResult result = minimize_f(spec, 4, 7);
  REQUIRE(result.converged);
  CHECK(result.feasibility_residual <= kConvergedResidual);
}

TEST_CASE("uniformity deviation") {
  const FeasibleRegionSpec spec = full_support({2, 2, 2});
  CHECK(uniformity_deviation(uniform_tuple(spec)) == 0.0);

  const SpectraTuple skew = SpectraTuple::make(
      Spectrum::make({0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.3}),
      Spectrum::uniform(4), Spectrum::uniform(4), Spectrum::uniform(2),
      {2, 2, 2});
  CHECK(uniformity_deviation(skew) ==
        doctest::Approx((0.3 - 0.1) / 0.3).epsilon(1e-12));
}

TEST_CASE("perturbation delta: trivial cases") {
  const TransferConfig config = random_transfer_config({2, 2, 2}, 5);

  const PerturbationDelta zero =
      perturbation_delta(config.tuple, config.transfer, 0.0);
  CHECK(zero.predicted == 0.0);
  CHECK(zero.direct == 0.0);

  // All six section values equal: the predicted change is delta * ln 1 = 0.
  const TripartiteDims dims{2, 2, 2};
  const SpectraTuple flat = SpectraTuple::make(
      Spectrum::uniform(8, SpectrumLabel::ABC),
      Spectrum::uniform(4, SpectrumLabel::AB),
      Spectrum::uniform(4, SpectrumLabel::BC),
      Spectrum::uniform(2, SpectrumLabel::B), dims);
  const TransferSpec sym{{0, 4}, {4, 8}, {0, 2}, {2, 4}, {0, 2}, {2, 4}};
  const PerturbationDelta even = perturbation_delta(flat, sym, 1e-6);
  CHECK(even.predicted == 0.0);
  CHECK(std::abs(even.direct) <= 1e-11);
}

TEST_CASE("perturbation delta rejects inadmissible transfers") {
  const TransferConfig config = random_transfer_config({2, 2, 2}, 6);
  // Far beyond the admissible mass: ordering or positivity must break.
  CHECK_THROWS_AS(
      perturbation_delta(config.tuple, config.transfer, 10.0 * config.max_delta),
      std::invalid_argument);

  // Non-constant section.
  const SpectraTuple tuple = config.tuple;
  TransferSpec bad = config.transfer;
  bad.abc_src = {0, tuple.abc().size()};
  CHECK_THROWS_AS(perturbation_delta(tuple, bad, 1e-6), std::invalid_argument);
}

TEST_CASE("perturbation error decays quadratically under delta halving") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TransferConfig config = random_transfer_config({2, 2, 2}, seed);
    double delta = 1e-4;
    double previous = -1.0;
    for (int step = 0; step < 4; ++step) {
      const PerturbationDelta pd =
          perturbation_delta(config.tuple, config.transfer, delta);
      const double err = std::abs(pd.direct - pd.predicted);
      if (previous > 0.0) {
        const double ratio = previous / err;
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
      }
      previous = err;
      delta /= 2.0;
    }
  }
}
