#include "ssalab/minimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ssalab/rng.hpp"

namespace ssalab {

namespace {

// Vector slots of a tuple, in a fixed order used by all internal machinery.
constexpr int kAbc = 0, kAb = 1, kBc = 2, kB = 3;

struct RawTuple {
  std::array<std::vector<double>, 4> v;
};

struct HalfSpace {
  int xv = 0;     // dominating vector slot
  int k = 0;      // prefix length on the x side
  int yv = 0;     // aggregated vector slot
  int block = 1;  // block size on the y side; y prefix runs over k blocks
};

/// Static description of one pattern's polytope.
struct Region {
  TripartiteDims dims;
  std::array<int, 4> len{};
  std::array<int, 4> zeros{};
  std::vector<HalfSpace> constraints;
};

Region build_region(const FeasibleRegionSpec& spec) {
  const TripartiteDims& d = spec.dims();
  Region region;
  region.dims = d;
  region.len = {d.total(), d.l * d.m, d.m * d.n, d.m};
  region.zeros = {spec.pattern().zeros_abc, spec.pattern().zeros_ab,
                  spec.pattern().zeros_bc, spec.pattern().zeros_b};
  for (int k = 1; k < d.l * d.m; ++k)
    region.constraints.push_back({kAb, k, kAbc, d.n});
  for (int k = 1; k < d.m * d.n; ++k)
    region.constraints.push_back({kBc, k, kAbc, d.l});
  for (int k = 1; k < d.m; ++k)
    region.constraints.push_back({kB, k, kBc, d.n});
  for (int k = 1; k < d.m; ++k)
    region.constraints.push_back({kB, k, kAb, d.l});
  return region;
}

/// prefix_x(k) - blocked_prefix_y(k) with the same summation order the
/// condition checkers use (per-block sums, then a prefix over blocks).
double constraint_margin(const RawTuple& t, const HalfSpace& c) {
  double px = 0.0;
  for (int i = 0; i < c.k; ++i) px += t.v[static_cast<size_t>(c.xv)][static_cast<size_t>(i)];
  double py = 0.0;
  const auto& y = t.v[static_cast<size_t>(c.yv)];
  for (int j = 0; j < c.k; ++j) {
    double bs = 0.0;
    for (int i = j * c.block; i < (j + 1) * c.block; ++i)
      bs += y[static_cast<size_t>(i)];
    py += bs;
  }
  return px - py;
}

double raw_objective(const RawTuple& t) {
  return entropy(t.v[kAb]) + entropy(t.v[kBc]) - entropy(t.v[kB]) -
         entropy(t.v[kAbc]);
}

SpectraTuple to_tuple(const RawTuple& t, const TripartiteDims& dims) {
  return SpectraTuple::make(Spectrum::make(t.v[kAbc], SpectrumLabel::ABC),
                            Spectrum::make(t.v[kAb], SpectrumLabel::AB),
                            Spectrum::make(t.v[kBc], SpectrumLabel::BC),
                            Spectrum::make(t.v[kB], SpectrumLabel::B), dims);
}

RawTuple from_tuple(const SpectraTuple& t) {
  RawTuple raw;
  raw.v[kAbc] = t.abc().values();
  raw.v[kAb] = t.ab().values();
  raw.v[kBc] = t.bc().values();
  raw.v[kB] = t.b().values();
  return raw;
}

// ------------------------------------------------------ feasibility geometry

/// Ascending isotonic regression (pool adjacent violators) on v[begin..end).
void isotonic_ascending(std::vector<double>& v, int begin) {
  const int n = static_cast<int>(v.size());
  if (n - begin <= 1) return;
  static thread_local std::vector<double> val;
  static thread_local std::vector<int> cnt;
  val.clear();
  cnt.clear();
  for (int i = begin; i < n; ++i) {
    double cv = v[static_cast<size_t>(i)];
    int cc = 1;
    while (!val.empty() && val.back() > cv) {
      cv = (val.back() * cnt.back() + cv * cc) / (cnt.back() + cc);
      cc += cnt.back();
      val.pop_back();
      cnt.pop_back();
    }
    val.push_back(cv);
    cnt.push_back(cc);
  }
  int i = begin;
  for (size_t b = 0; b < val.size(); ++b)
    for (int k = 0; k < cnt[b]; ++k) v[static_cast<size_t>(i++)] = val[b];
}

/// Projection onto {0 = v[0..z) and 0 <= v[z] <= ... <= v[n-1]}.
void chain_project(std::vector<double>& v, int z) {
  for (int i = 0; i < z; ++i) v[static_cast<size_t>(i)] = 0.0;
  isotonic_ascending(v, z);
  for (size_t i = static_cast<size_t>(z); i < v.size(); ++i)
    v[i] = std::max(v[i], 0.0);
}

/// Projection onto the unit-sum hyperplane within the free coordinates.
void sum_project(std::vector<double>& v, int z) {
  const int nf = static_cast<int>(v.size()) - z;
  double sum = 0.0;
  for (size_t i = static_cast<size_t>(z); i < v.size(); ++i) sum += v[i];
  const double shift = (1.0 - sum) / nf;
  for (size_t i = static_cast<size_t>(z); i < v.size(); ++i) v[i] += shift;
}

/// Euclidean projection onto one majorization half-space, restricted to the
/// free coordinates of both participating vectors.
void halfspace_project(RawTuple& t, const Region& region, const HalfSpace& c) {
  const double margin = constraint_margin(t, c);
  if (margin >= 0.0) return;
  auto& x = t.v[static_cast<size_t>(c.xv)];
  auto& y = t.v[static_cast<size_t>(c.yv)];
  const int m = c.k * c.block;
  const int kx = std::max(0, c.k - region.zeros[static_cast<size_t>(c.xv)]);
  const int ky = std::max(0, m - region.zeros[static_cast<size_t>(c.yv)]);
  if (kx + ky == 0) return;  // frozen prefixes; nothing can move
  const double shift = -margin / (kx + ky);
  for (int i = region.zeros[static_cast<size_t>(c.xv)]; i < c.k; ++i)
    x[static_cast<size_t>(i)] += shift;
  for (int j = region.zeros[static_cast<size_t>(c.yv)]; j < m; ++j)
    y[static_cast<size_t>(j)] -= shift;
}

/// Worst violation across ordering chains, normalization, frozen zeros and
/// majorization half-spaces.
double feasibility_residual(const RawTuple& t, const Region& region) {
  double worst = 0.0;
  for (int s = 0; s < 4; ++s) {
    const auto& v = t.v[static_cast<size_t>(s)];
    const int z = region.zeros[static_cast<size_t>(s)];
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      const double x = v[static_cast<size_t>(i)];
      if (i < z) worst = std::max(worst, std::abs(x));
      if (x < 0.0) worst = std::max(worst, -x);
      if (i + 1 < static_cast<int>(v.size()))
        worst = std::max(worst, x - v[static_cast<size_t>(i + 1)]);
      sum += x;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (const HalfSpace& c : region.constraints)
    worst = std::max(worst, -constraint_margin(t, c));
  return worst;
}

/// Cyclic alternating projections until the residual drops below tol.
/// Returns the final residual (the caller decides what counts as converged).
double project_to_feasible(RawTuple& t, const Region& region,
                           double tol = kFeasibilityTol,
                           int max_sweeps = 4000) {
  double residual = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (const HalfSpace& c : region.constraints)
      halfspace_project(t, region, c);
    for (int s = 0; s < 4; ++s) {
      chain_project(t.v[static_cast<size_t>(s)], region.zeros[static_cast<size_t>(s)]);
      sum_project(t.v[static_cast<size_t>(s)], region.zeros[static_cast<size_t>(s)]);
    }
    residual = feasibility_residual(t, region);
    if (residual <= tol) break;
  }
  return residual;
}

// ------------------------------------------------------------------ sampling

/// One joint draw: sorted-exponential simplex point on each support.
RawTuple draw_tuple(const Region& region, SplitMix64& rng) {
  RawTuple t;
  for (int s = 0; s < 4; ++s) {
    const int n = region.len[static_cast<size_t>(s)];
    const int z = region.zeros[static_cast<size_t>(s)];
    std::vector<double>& v = t.v[static_cast<size_t>(s)];
    v.assign(static_cast<size_t>(n), 0.0);
    double sum = 0.0;
    for (int i = z; i < n; ++i) {
      const double e = rng.exponential();
      v[static_cast<size_t>(i)] = e;
      sum += e;
    }
    for (int i = z; i < n; ++i) v[static_cast<size_t>(i)] /= sum;
    std::sort(v.begin() + z, v.end());
  }
  return t;
}

bool satisfies_conditions(const RawTuple& t, const Region& region) {
  for (const HalfSpace& c : region.constraints)
    if (constraint_margin(t, c) < 0.0) return false;
  return true;
}

RawTuple sample_raw(const Region& region, const FeasibleRegionSpec& spec,
                    std::uint64_t seed, long budget, long* attempts_out) {
  SplitMix64 rng(seed);
  for (long attempt = 1; attempt <= budget; ++attempt) {
    RawTuple t = draw_tuple(region, rng);
    if (satisfies_conditions(t, region)) {
      if (attempts_out) *attempts_out += attempt;
      return t;
    }
  }
  std::ostringstream msg;
  msg << "sampler: no feasible tuple in " << budget << " draws for dims ("
      << spec.dims().l << ", " << spec.dims().m << ", " << spec.dims().n
      << "), zeros (abc=" << spec.pattern().zeros_abc
      << ", bc=" << spec.pattern().zeros_bc
      << ", ab=" << spec.pattern().zeros_ab
      << ", b=" << spec.pattern().zeros_b << "), seed " << seed;
  throw SamplerFailure(msg.str());
}

}  // namespace

// ----------------------------------------------------------------- public API

FeasibleRegionSpec FeasibleRegionSpec::make(TripartiteDims dims,
                                            SupportPattern pattern,
                                            double tolerance) {
  validate(dims);
  if (tolerance <= 0.0)
    throw std::invalid_argument("feasible region: tolerance must be positive");

  const auto check_count = [](int zeros, int len, const char* name) {
    if (zeros < 0 || zeros > len - 1) {
      std::ostringstream msg;
      msg << "feasible region: " << name << " zero count " << zeros
          << " outside [0, " << len - 1 << "]";
      throw std::invalid_argument(msg.str());
    }
  };
  check_count(pattern.zeros_abc, dims.total(), "abc");
  check_count(pattern.zeros_ab, dims.l * dims.m, "ab");
  check_count(pattern.zeros_bc, dims.m * dims.n, "bc");
  check_count(pattern.zeros_b, dims.m, "b");

  if (pattern.zeros_abc == dims.l * pattern.zeros_bc) {
    const int need = required_b_zeros(pattern.zeros_ab, dims.l);
    if (pattern.zeros_b < need) {
      std::ostringstream msg;
      msg << "feasible region: pattern violates the zero-count condition: "
          << pattern.zeros_ab << " zeros in the AB vector demand at least "
          << need << " zeros in the B vector, got " << pattern.zeros_b;
      throw std::invalid_argument(msg.str());
    }
  }
  if (pattern.zeros_abc == dims.n * pattern.zeros_ab) {
    const int need = required_b_zeros(pattern.zeros_bc, dims.n);
    if (pattern.zeros_b < need) {
      std::ostringstream msg;
      msg << "feasible region: pattern violates the zero-count condition "
          << "(exchanged orientation): " << pattern.zeros_bc
          << " zeros in the BC vector demand at least " << need
          << " zeros in the B vector, got " << pattern.zeros_b;
      throw std::invalid_argument(msg.str());
    }
  }
  return FeasibleRegionSpec(dims, pattern, tolerance);
}

double objective_f(const SpectraTuple& tuple) {
  return entropy(tuple.ab()) + entropy(tuple.bc()) - entropy(tuple.b()) -
         entropy(tuple.abc());
}

SpectraTuple sample_feasible(const FeasibleRegionSpec& spec, std::uint64_t seed,
                             long budget) {
  if (budget < 1)
    throw std::invalid_argument("sampler: budget must be >= 1");
  const Region region = build_region(spec);
  return to_tuple(sample_raw(region, spec, seed, budget, nullptr), spec.dims());
}

OracleScanResult oracle_scan(const FeasibleRegionSpec& spec, long samples,
                             std::uint64_t seed,
                             const std::vector<SpectraTuple>& injected) {
  if (samples < 1 && injected.empty())
    throw std::invalid_argument("oracle: needs at least one sample");
  const Region region = build_region(spec);
  OracleScanResult result;
  result.min_f = std::numeric_limits<double>::infinity();

  auto consider = [&](const RawTuple& t) {
    const double f = raw_objective(t);
    ++result.samples;
    if (f < result.min_f) {
      result.min_f = f;
      result.argmin = to_tuple(t, spec.dims());
    }
  };

  for (const SpectraTuple& t : injected) consider(from_tuple(t));
  for (long i = 0; i < samples; ++i) {
    consider(sample_raw(region, spec, derive_seed(seed, static_cast<std::uint64_t>(i)),
                        kDefaultSampleBudget, &result.attempts));
  }
  return result;
}

double uniformity_deviation(const SpectraTuple& tuple, double threshold) {
  double worst = 0.0;
  for (const Spectrum* s : {&tuple.abc(), &tuple.ab(), &tuple.bc(), &tuple.b()}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    int count = 0;
    for (double x : s->values()) {
      if (x > threshold) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        ++count;
      }
    }
    if (count >= 2) worst = std::max(worst, (hi - lo) / hi);
  }
  return worst;
}

SpectraTuple uniform_tuple(const FeasibleRegionSpec& spec) {
  const Region region = build_region(spec);
  RawTuple t;
  for (int s = 0; s < 4; ++s) {
    const int n = region.len[static_cast<size_t>(s)];
    const int z = region.zeros[static_cast<size_t>(s)];
    t.v[static_cast<size_t>(s)].assign(static_cast<size_t>(n), 0.0);
    for (int i = z; i < n; ++i)
      t.v[static_cast<size_t>(s)][static_cast<size_t>(i)] = 1.0 / (n - z);
  }
  return to_tuple(t, spec.dims());
}

MinimizationResult minimize_f(const FeasibleRegionSpec& spec, int restarts,
                              std::uint64_t seed) {
  if (restarts < 1)
    throw std::invalid_argument("minimize: restarts must be >= 1");
  const Region region = build_region(spec);

  MinimizationResult result;
  result.restarts = restarts;
  double best_objective = std::numeric_limits<double>::infinity();
  RawTuple best_tuple;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    RestartStat stat;
    stat.seed = derive_seed(seed, static_cast<std::uint64_t>(restart));

    RawTuple x;
    try {
      x = sample_raw(region, spec, stat.seed, kDefaultSampleBudget, nullptr);
    } catch (const SamplerFailure&) {
      stat.sampler_failed = true;
      result.restart_stats.push_back(stat);
      continue;
    }
    double fx = raw_objective(x);
    stat.start_objective = fx;

    // Projected descent with backtracking halving. The gradient of F is
    // componentwise -ln(v)-1 on the AB/BC vectors and +ln(v)+1 on the B/ABC
    // vectors; frozen zero coordinates never move.
    double eta = 0.1;
    RawTuple grad = x;  // shape reuse
    int iter = 0;
    for (; iter < kMaxDescentIterations; ++iter) {
      for (int s = 0; s < 4; ++s) {
        const double sign = (s == kAb || s == kBc) ? -1.0 : 1.0;
        const int z = region.zeros[static_cast<size_t>(s)];
        auto& g = grad.v[static_cast<size_t>(s)];
        const auto& v = x.v[static_cast<size_t>(s)];
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
          if (i < z) {
            g[static_cast<size_t>(i)] = 0.0;
            continue;
          }
          const double lnv = std::log(std::max(v[static_cast<size_t>(i)], 1e-300));
          g[static_cast<size_t>(i)] = std::clamp(sign * (lnv + 1.0), -1e3, 1e3);
        }
      }

      bool stepped = false;
      double improvement = 0.0;
      while (eta >= 1e-14) {
        RawTuple cand = x;
        for (int s = 0; s < 4; ++s) {
          auto& v = cand.v[static_cast<size_t>(s)];
          const auto& g = grad.v[static_cast<size_t>(s)];
          for (size_t i = 0; i < v.size(); ++i) v[i] -= eta * g[i];
        }
        const double res = project_to_feasible(cand, region);
        const double fc = raw_objective(cand);
        if (res <= kFeasibilityTol && fc < fx) {
          improvement = fx - fc;
          x = std::move(cand);
          fx = fc;
          eta = std::min(eta * 1.5, 1.0);
          stepped = true;
          break;
        }
        eta *= 0.5;
      }
      if (!stepped || improvement < kDescentImprovementTol) break;
    }

    // Exact cleanup: clamp the chain and renormalize multiplicatively so
    // the tuple satisfies the Spectrum invariants (the alternating
    // projections only reach the residual tolerance).
    for (int s = 0; s < 4; ++s) {
      auto& v = x.v[static_cast<size_t>(s)];
      chain_project(v, region.zeros[static_cast<size_t>(s)]);
      double sum = 0.0;
      for (double value : v) sum += value;
      for (double& value : v) value /= sum;
    }
    fx = raw_objective(x);

    stat.iterations = iter;
    stat.objective = fx;
    stat.feasibility_residual = feasibility_residual(x, region);
    stat.converged = stat.feasibility_residual <= kConvergedResidual;
    result.restart_stats.push_back(stat);

    if (stat.converged) {
      ++result.converged_restarts;
      if (fx < best_objective) {
        best_objective = fx;
        best_tuple = x;
        best_residual = stat.feasibility_residual;
      }
    }
  }

  result.converged = result.converged_restarts > 0;
  if (result.converged) {
    result.minimizer = to_tuple(best_tuple, spec.dims());
    result.objective = best_objective;
    result.feasibility_residual = best_residual;
    result.uniformity_deviation = uniformity_deviation(*result.minimizer);
  } else {
    result.objective = std::numeric_limits<double>::quiet_NaN();
    result.feasibility_residual = std::numeric_limits<double>::quiet_NaN();
    result.uniformity_deviation = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

// -------------------------------------------------- first-order perturbation

namespace {

double section_value(const std::vector<double>& v, const SectionRef& sec,
                     const char* name) {
  const int n = static_cast<int>(v.size());
  if (sec.begin < 0 || sec.end > n || sec.length() < 1) {
    std::ostringstream msg;
    msg << "perturbation: section " << name << " [" << sec.begin << ", "
        << sec.end << ") invalid for length " << n;
    throw std::invalid_argument(msg.str());
  }
  const double value = v[static_cast<size_t>(sec.begin)];
  for (int i = sec.begin; i < sec.end; ++i) {
    if (std::abs(v[static_cast<size_t>(i)] - value) > 1e-12) {
      std::ostringstream msg;
      msg << "perturbation: section " << name << " is not constant";
      throw std::invalid_argument(msg.str());
    }
  }
  return value;
}

void apply_transfer(std::vector<double>& v, const SectionRef& src,
                    const SectionRef& dst, double delta) {
  const double out = delta / src.length();
  const double in = delta / dst.length();
  for (int i = src.begin; i < src.end; ++i) v[static_cast<size_t>(i)] -= out;
  for (int i = dst.begin; i < dst.end; ++i) v[static_cast<size_t>(i)] += in;
}

void require_admissible(const std::vector<double>& v, const char* name) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) {
      std::ostringstream msg;
      msg << "perturbation: transfer drives " << name << " negative";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && v[i] < v[i - 1] - 1e-15) {
      std::ostringstream msg;
      msg << "perturbation: transfer breaks the ordering of " << name;
      throw std::invalid_argument(msg.str());
    }
  }
}

/// Exact difference of sum(x ln x) over the six touched sections only, so
/// the result carries no cancellation from untouched entries.
double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double section_term_change(double value, int length, double delta_per_entry) {
  return length * (xlnx(value + delta_per_entry) - xlnx(value));
}

}  // namespace

PerturbationDelta perturbation_delta(const SpectraTuple& tuple,
                                     const TransferSpec& transfer,
                                     double delta) {
  const auto& abc = tuple.abc().values();
  const auto& ab = tuple.ab().values();
  const auto& bc = tuple.bc().values();

  const double abc_src = section_value(abc, transfer.abc_src, "abc src");
  const double abc_dst = section_value(abc, transfer.abc_dst, "abc dst");
  const double ab_src = section_value(ab, transfer.ab_src, "ab src");
  const double ab_dst = section_value(ab, transfer.ab_dst, "ab dst");
  const double bc_src = section_value(bc, transfer.bc_src, "bc src");
  const double bc_dst = section_value(bc, transfer.bc_dst, "bc dst");

  if (abc_src <= 0.0 || ab_src <= 0.0 || bc_src <= 0.0 || abc_dst <= 0.0 ||
      ab_dst <= 0.0 || bc_dst <= 0.0)
    throw std::invalid_argument("perturbation: sections must be positive");

  PerturbationDelta result;
  result.predicted =
      delta * std::log((abc_dst * ab_src * bc_src) /
                       (abc_src * ab_dst * bc_dst));

  if (delta != 0.0) {
    std::vector<double> abc2 = abc, ab2 = ab, bc2 = bc;
    apply_transfer(abc2, transfer.abc_src, transfer.abc_dst, delta);
    apply_transfer(ab2, transfer.ab_src, transfer.ab_dst, delta);
    apply_transfer(bc2, transfer.bc_src, transfer.bc_dst, delta);
    require_admissible(abc2, "abc");
    require_admissible(ab2, "ab");
    require_admissible(bc2, "bc");
  }

  // F carries +x ln x on the ABC sum and -x ln x on the AB and BC sums.
  double direct = 0.0;
  direct += section_term_change(abc_src, transfer.abc_src.length(),
                                -delta / transfer.abc_src.length());
  direct += section_term_change(abc_dst, transfer.abc_dst.length(),
                                delta / transfer.abc_dst.length());
  direct -= section_term_change(ab_src, transfer.ab_src.length(),
                                -delta / transfer.ab_src.length());
  direct -= section_term_change(ab_dst, transfer.ab_dst.length(),
                                delta / transfer.ab_dst.length());
  direct -= section_term_change(bc_src, transfer.bc_src.length(),
                                -delta / transfer.bc_src.length());
  direct -= section_term_change(bc_dst, transfer.bc_dst.length(),
                                delta / transfer.bc_dst.length());
  result.direct = direct;
  return result;
}

TransferConfig random_transfer_config(const TripartiteDims& dims,
                                      std::uint64_t seed) {
  validate(dims);
  const int n_abc = dims.total();
  const int n_ab = dims.l * dims.m;
  const int n_bc = dims.m * dims.n;
  if (n_abc < 3 || n_ab < 3 || n_bc < 3)
    throw std::invalid_argument(
        "perturbation config: each sectioned vector needs length >= 3");

  SplitMix64 rng(seed);

  struct Piece {
    std::vector<double> values;
    SectionRef src, dst;
    double src_value = 0.0, dst_value = 0.0;
    double max_delta = 0.0;
  };

  auto draw_piece = [&](int n) {
    Piece piece;
    const int l1 = 1 + rng.uniform_int(n - 2);
    const int l2 = 1 + rng.uniform_int(n - l1 - 1);
    const int l3 = n - l1 - l2;
    double v1 = rng.uniform(0.3, 0.8);
    double v2 = v1 * rng.uniform(1.4, 2.2);
    double v3 = v2 * rng.uniform(1.4, 2.2);
    const double total = l1 * v1 + l2 * v2 + l3 * v3;
    v1 /= total;
    v2 /= total;
    v3 /= total;
    piece.values.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < l1; ++i) piece.values[static_cast<size_t>(i)] = v1;
    for (int i = l1; i < l1 + l2; ++i) piece.values[static_cast<size_t>(i)] = v2;
    for (int i = l1 + l2; i < n; ++i) piece.values[static_cast<size_t>(i)] = v3;
    piece.src = {l1, l1 + l2};
    piece.dst = {l1 + l2, n};
    piece.src_value = v2;
    piece.dst_value = v3;
    // The src section drops toward its lower neighbor; keep a safety factor.
    piece.max_delta = 0.45 * l2 * (v2 - v1);
    return piece;
  };

  constexpr int kMaxTries = 20000;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    const Piece pa = draw_piece(n_abc);
    const Piece pb = draw_piece(n_ab);
    const Piece pc = draw_piece(n_bc);

    double min_value = 1.0;
    for (const Piece* p : {&pa, &pb, &pc})
      for (double x : p->values) min_value = std::min(min_value, x);
    if (min_value < 0.04) continue;

    const double max_delta =
        std::min({pa.max_delta, pb.max_delta, pc.max_delta});
    if (max_delta < 4e-4) continue;

    auto inv = [](const Piece& p, bool src) {
      const SectionRef& sec = src ? p.src : p.dst;
      const double value = src ? p.src_value : p.dst_value;
      return 1.0 / (sec.length() * value);
    };
    auto inv2 = [](const Piece& p, bool src) {
      const SectionRef& sec = src ? p.src : p.dst;
      const double value = src ? p.src_value : p.dst_value;
      return 1.0 / (static_cast<double>(sec.length()) * sec.length() * value *
                    value);
    };
    // Second- and third-order coefficients of the exact change in delta.
    const double curvature = inv(pa, true) + inv(pa, false) - inv(pb, true) -
                             inv(pb, false) - inv(pc, true) - inv(pc, false);
    const double third = inv2(pa, true) - inv2(pa, false) - inv2(pb, true) +
                         inv2(pb, false) - inv2(pc, true) + inv2(pc, false);
    if (std::abs(curvature) < 1.0) continue;
    // Keep the cubic correction to the halving ratios under ~5%.
    if (std::abs(third) * 1e-4 > 0.15 * std::abs(curvature)) continue;

    TransferConfig config{
        SpectraTuple::make(
            Spectrum::make(pa.values, SpectrumLabel::ABC),
            Spectrum::make(pb.values, SpectrumLabel::AB),
            Spectrum::make(pc.values, SpectrumLabel::BC),
            Spectrum::uniform(dims.m, SpectrumLabel::B), dims),
        TransferSpec{pa.src, pa.dst, pb.src, pb.dst, pc.src, pc.dst},
        max_delta, curvature};
    return config;
  }
  throw std::runtime_error(
      "perturbation config: no admissible configuration found");
}

}  // namespace ssalab
