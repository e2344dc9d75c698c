// ssalab.cpp — command-line front end: verification sweeps over random
// density matrices, entropy-functional minimization runs, and first-order
// perturbation checks, all emitting machine-readable reports.
//
// Exit codes: 0 = all checks pass, 1 = mathematical violation or
// non-convergence, 2 = usage or input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssalab/conditions.hpp"
#include "ssalab/minimizer.hpp"
#include "ssalab/report_json.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/stategen.hpp"

namespace {

using ssalab::Json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

constexpr double kMinimumFloor = -1e-6;  // minima below this count as negative
constexpr double kRatioLo = 3.5;         // quadratic-decay acceptance band
constexpr double kRatioHi = 4.5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ssalab::TripartiteDims parse_dims(const std::string& text) {
  std::vector<int> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      size_t pos = 0;
      const int value = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      parts.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("--dims: cannot parse '" + item + "' as an integer");
    }
  }
  if (parts.size() != 3)
    throw UsageError("--dims: expected a triple L,M,N, got '" + text + "'");
  ssalab::TripartiteDims dims{parts[0], parts[1], parts[2]};
  try {
    ssalab::validate(dims);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return dims;
}

std::vector<std::optional<ssalab::SupportPattern>> parse_patterns(
    const std::string& text) {
  std::vector<std::optional<ssalab::SupportPattern>> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ';')) {
    if (item.empty()) continue;
    if (item == "full") {
      out.push_back(ssalab::SupportPattern{0, 0, 0, 0});
      continue;
    }
    std::vector<int> parts;
    std::stringstream inner(item);
    std::string cell;
    while (std::getline(inner, cell, ',')) {
      try {
        parts.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        throw UsageError("--patterns: cannot parse '" + cell + "'");
      }
    }
    if (parts.size() != 4)
      throw UsageError(
          "--patterns: expected 'full' or four counts zabc,zbc,zab,zb, got '" +
          item + "'");
    out.push_back(ssalab::SupportPattern{parts[0], parts[1], parts[2], parts[3]});
  }
  if (out.empty()) throw UsageError("--patterns: empty pattern list");
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("SSALAB_SEED")) {
    try {
      size_t pos = 0;
      const std::uint64_t value = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
      return value;
    } catch (const std::exception&) {
      throw UsageError(std::string("SSALAB_SEED: cannot parse '") + env + "'");
    }
  }
  return 0;
}

void write_output(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write output file " + path);
  out << content;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  return Json(x).dump();
}

Json tolerance_block(double tol, double threshold) {
  Json j;
  j["majorization_tolerance"] = tol;
  j["rank_threshold"] = threshold;
  j["hermitian_tolerance"] = ssalab::kHermitianTol;
  j["trace_tolerance"] = ssalab::kTraceTol;
  return j;
}

// ------------------------------------------------------------------- verify

struct VerifyOptions {
  std::string dims_text;
  int states = 100;
  std::optional<std::uint64_t> seed;
  std::string generator = "ginibre_full";
  int rank = 0;
  int zeros = 0;
  std::string genspec;
  std::string input;
  double tolerance = ssalab::kMajorizationTol;
  double threshold = ssalab::kRankThreshold;
  std::string output;
  std::string format = "json";
};

bool report_violates(const ssalab::ConditionReport& r, double tol) {
  if (!r.lemma1.all_hold()) return true;
  if (r.ssa_gap < -tol) return true;
  if (r.subadd_gap && *r.subadd_gap < -tol) return true;
  if (r.lemma2.applicable && !r.lemma2.conclusion_holds) return true;
  if (!r.theorem_conditions.all_hold()) return true;
  return false;
}

int run_verify(const VerifyOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed);

  struct Entry {
    std::string origin;
    ssalab::ConditionReport report;
  };
  std::vector<Entry> entries;

  if (!opt.input.empty()) {
    const ssalab::DensityMatrix rho = ssalab::load_density_matrix(opt.input);
    entries.push_back(
        {opt.input, ssalab::make_condition_report(rho, opt.tolerance, opt.threshold)});
  } else {
    if (opt.dims_text.empty())
      throw UsageError("verify: either --input or --dims is required");
    const ssalab::TripartiteDims dims = parse_dims(opt.dims_text);
    if (opt.states < 1) throw UsageError("verify: --states must be >= 1");

    ssalab::GeneratorSpec base;
    if (!opt.genspec.empty()) {
      base = ssalab::GeneratorSpec::from_json_text(opt.genspec);
    } else {
      base.dims = dims;
      base.kind = ssalab::state_kind_from_string(opt.generator);
      base.rank = opt.rank;
      base.zeros = opt.zeros;
    }
    for (int i = 0; i < opt.states; ++i) {
      ssalab::GeneratorSpec spec = base;
      spec.seed = ssalab::derive_seed(seed, static_cast<std::uint64_t>(i));
      const ssalab::DensityMatrix rho = ssalab::generate(spec);
      entries.push_back({spec.to_json_text(),
                         ssalab::make_condition_report(rho, opt.tolerance,
                                                       opt.threshold)});
    }
  }

  // Summary: minima over the sweep.
  double min_l1 = std::numeric_limits<double>::infinity();
  double min_ssa = std::numeric_limits<double>::infinity();
  double min_subadd = std::numeric_limits<double>::infinity();
  bool any_subadd = false;
  int violations = 0;
  for (const Entry& e : entries) {
    min_l1 = std::min(min_l1, e.report.lemma1.min_margin());
    min_ssa = std::min(min_ssa, e.report.ssa_gap);
    if (e.report.subadd_gap) {
      any_subadd = true;
      min_subadd = std::min(min_subadd, *e.report.subadd_gap);
    }
    if (report_violates(e.report, opt.tolerance)) ++violations;
  }

  std::string content;
  if (opt.format == "json") {
    Json doc;
    doc["command"] = "verify";
    doc["seed"] = seed;
    doc["tolerances"] = tolerance_block(opt.tolerance, opt.threshold);
    doc["states"] = Json::array();
    for (size_t i = 0; i < entries.size(); ++i) {
      Json row;
      row["index"] = i;
      row["origin"] = entries[i].origin;
      row["report"] = to_json(entries[i].report);
      doc["states"].push_back(std::move(row));
    }
    Json summary;
    summary["count"] = entries.size();
    summary["violations"] = violations;
    summary["min_lemma1_margin"] = min_l1;
    summary["min_ssa_gap"] = min_ssa;
    summary["min_subadd_gap"] = any_subadd ? Json(min_subadd) : Json(nullptr);
    doc["summary"] = std::move(summary);
    content = doc.dump(2) + "\n";
  } else if (opt.format == "csv") {
    std::ostringstream out;
    out << "index,origin,l1_1_holds,l1_1_margin,l1_2_holds,l1_2_margin,"
           "l1_31_holds,l1_31_margin,l1_32_holds,l1_32_margin,"
           "l2_applicable,l2_conclusion,l2_r,l2_s,l2_t,l2_ls,l2_bound,"
           "th_1_holds,th_1_margin,th_2_holds,th_2_margin,th_3_holds,"
           "th_3_margin,th_4_holds,th_4_applicable,ssa_gap,subadd_gap\n";
    for (size_t i = 0; i < entries.size(); ++i) {
      const ssalab::ConditionReport& r = entries[i].report;
      out << i << ",\"" << entries[i].origin << "\"";
      for (const auto& rel : r.lemma1.relations)
        out << ',' << (rel.holds ? 1 : 0) << ',' << csv_number(rel.min_margin);
      out << ',' << (r.lemma2.applicable ? 1 : 0) << ','
          << (r.lemma2.conclusion_holds ? 1 : 0) << ',' << r.lemma2.r << ','
          << r.lemma2.s << ',' << r.lemma2.t << ',' << r.lemma2.ls_count << ','
          << r.lemma2.bound;
      const auto& th = r.theorem_conditions;
      out << ',' << (th.cond1.holds ? 1 : 0) << ','
          << csv_number(th.cond1.min_margin) << ',' << (th.cond2.holds ? 1 : 0)
          << ',' << csv_number(th.cond2.min_margin) << ','
          << (th.cond3_holds() ? 1 : 0) << ',' << csv_number(th.cond3_margin())
          << ',' << (th.cond4.holds ? 1 : 0) << ','
          << (th.cond4.applicable ? 1 : 0);
      out << ',' << csv_number(r.ssa_gap) << ','
          << (r.subadd_gap ? csv_number(*r.subadd_gap) : "") << '\n';
    }
    content = out.str();
  } else {
    throw UsageError("--format: expected json or csv");
  }

  write_output(content, opt.output);
  return violations == 0 ? kExitOk : kExitViolation;
}

// ----------------------------------------------------------------- minimize

struct MinimizeOptions {
  std::string dims_text;
  int restarts = ssalab::kDefaultRestarts;
  long oracle = ssalab::kDefaultOracleSamples;
  std::optional<std::uint64_t> seed;
  std::string patterns = "full";
  double tolerance = ssalab::kMajorizationTol;
  double threshold = ssalab::kRankThreshold;
  std::string output;
  std::string format = "json";
};

int run_minimize(const MinimizeOptions& opt) {
  if (opt.dims_text.empty()) throw UsageError("minimize: --dims is required");
  const ssalab::TripartiteDims dims = parse_dims(opt.dims_text);
  if (opt.restarts < 1) throw UsageError("minimize: --restarts must be >= 1");
  if (opt.oracle < 1) throw UsageError("minimize: --oracle must be >= 1");
  const std::uint64_t seed = resolve_seed(opt.seed);
  const auto patterns = parse_patterns(opt.patterns);

  bool negative_minimum = false;
  Json results = Json::array();
  std::ostringstream csv;
  csv << "pattern,zeros_abc,zeros_bc,zeros_ab,zeros_b,converged,objective,"
         "feasibility_residual,uniformity_deviation,converged_restarts,"
         "oracle_min,oracle_samples,sampler_failure\n";

  for (size_t p = 0; p < patterns.size(); ++p) {
    const ssalab::SupportPattern pattern = *patterns[p];
    ssalab::FeasibleRegionSpec spec =
        ssalab::FeasibleRegionSpec::make(dims, pattern, opt.tolerance);

    Json row;
    row["pattern"] = to_json(pattern);
    std::string failure;

    const std::uint64_t pattern_seed =
        ssalab::derive_seed(seed, 1000 + static_cast<std::uint64_t>(p));
    const ssalab::MinimizationResult mins =
        ssalab::minimize_f(spec, opt.restarts, pattern_seed);
    row["minimize"] = to_json(mins);
    if (mins.converged && mins.objective < kMinimumFloor)
      negative_minimum = true;

    Json oracle_json = nullptr;
    double oracle_min = std::numeric_limits<double>::quiet_NaN();
    try {
      const ssalab::OracleScanResult oracle = ssalab::oracle_scan(
          spec, opt.oracle, ssalab::derive_seed(seed, 2000 + static_cast<std::uint64_t>(p)));
      oracle_json = to_json(oracle);
      oracle_min = oracle.min_f;
      if (oracle.min_f < kMinimumFloor) negative_minimum = true;
    } catch (const ssalab::SamplerFailure& e) {
      failure = e.what();
    }
    row["oracle"] = std::move(oracle_json);
    row["sampler_failure"] = failure.empty() ? Json(nullptr) : Json(failure);
    results.push_back(std::move(row));

    csv << p << ',' << pattern.zeros_abc << ',' << pattern.zeros_bc << ','
        << pattern.zeros_ab << ',' << pattern.zeros_b << ','
        << (mins.converged ? 1 : 0) << ',' << csv_number(mins.objective) << ','
        << csv_number(mins.feasibility_residual) << ','
        << csv_number(mins.uniformity_deviation) << ','
        << mins.converged_restarts << ',' << csv_number(oracle_min) << ','
        << opt.oracle << ",\"" << failure << "\"\n";
  }

  std::string content;
  if (opt.format == "json") {
    Json doc;
    doc["command"] = "minimize";
    doc["dims"] = {dims.l, dims.m, dims.n};
    doc["seed"] = seed;
    doc["restarts"] = opt.restarts;
    doc["oracle_samples"] = opt.oracle;
    doc["tolerances"] = tolerance_block(opt.tolerance, opt.threshold);
    doc["minimum_floor"] = kMinimumFloor;
    doc["patterns"] = std::move(results);
    doc["summary"] = Json{{"negative_minimum", negative_minimum}};
    content = doc.dump(2) + "\n";
  } else if (opt.format == "csv") {
    content = csv.str();
  } else {
    throw UsageError("--format: expected json or csv");
  }

  write_output(content, opt.output);
  return negative_minimum ? kExitViolation : kExitOk;
}

// ------------------------------------------------------------- perturb-check

struct PerturbOptions {
  std::string dims_text = "2,2,2";
  int configs = 100;
  std::string deltas = "1e-4,5e-5,2.5e-5";
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "json";
};

int run_perturb_check(const PerturbOptions& opt) {
  const ssalab::TripartiteDims dims = parse_dims(opt.dims_text);
  if (opt.configs < 1) throw UsageError("perturb-check: --configs must be >= 1");
  const std::uint64_t seed = resolve_seed(opt.seed);

  std::vector<double> ladder;
  {
    std::stringstream stream(opt.deltas);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
      try {
        ladder.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw UsageError("--deltas: cannot parse '" + cell + "'");
      }
    }
    if (ladder.size() < 2)
      throw UsageError("--deltas: need at least two rungs for decay ratios");
    for (size_t i = 1; i < ladder.size(); ++i)
      if (!(ladder[i] < ladder[i - 1]) || ladder[i] <= 0.0)
        throw UsageError("--deltas: rungs must be positive and decreasing");
  }

  bool all_pass = true;
  Json configs = Json::array();
  std::ostringstream csv;
  csv << "config,curvature,delta,predicted,direct,error,ratio\n";

  for (int c = 0; c < opt.configs; ++c) {
    std::optional<ssalab::TransferConfig> maybe_config;
    try {
      maybe_config = ssalab::random_transfer_config(
          dims, ssalab::derive_seed(seed, static_cast<std::uint64_t>(c)));
    } catch (const std::exception& e) {
      write_output(std::string("perturb-check: ") + e.what() + "\n", opt.output);
      return kExitViolation;
    }
    const ssalab::TransferConfig& config = *maybe_config;

    Json rows = Json::array();
    std::vector<double> errors;
    {
      // The exact-zero row: no transfer, no change.
      const ssalab::PerturbationDelta zero =
          ssalab::perturbation_delta(config.tuple, config.transfer, 0.0);
      Json row;
      row["delta"] = 0.0;
      row["predicted"] = zero.predicted;
      row["direct"] = zero.direct;
      row["error"] = std::abs(zero.direct - zero.predicted);
      rows.push_back(std::move(row));
      csv << c << ',' << csv_number(config.curvature) << ",0,"
          << csv_number(zero.predicted) << ',' << csv_number(zero.direct)
          << ',' << csv_number(std::abs(zero.direct - zero.predicted)) << ",\n";
    }
    for (size_t r = 0; r < ladder.size(); ++r) {
      const ssalab::PerturbationDelta pd =
          ssalab::perturbation_delta(config.tuple, config.transfer, ladder[r]);
      const double err = std::abs(pd.direct - pd.predicted);
      errors.push_back(err);
      Json row;
      row["delta"] = ladder[r];
      row["predicted"] = pd.predicted;
      row["direct"] = pd.direct;
      row["error"] = err;
      if (r > 0) row["ratio"] = errors[r - 1] / err;
      rows.push_back(std::move(row));
      csv << c << ',' << csv_number(config.curvature) << ','
          << csv_number(ladder[r]) << ',' << csv_number(pd.predicted) << ','
          << csv_number(pd.direct) << ',' << csv_number(err) << ','
          << (r > 0 ? csv_number(errors[r - 1] / err) : "") << '\n';
    }

    bool pass = true;
    for (size_t r = 1; r < errors.size(); ++r) {
      const double ratio = errors[r - 1] / errors[r];
      if (!(ratio >= kRatioLo && ratio <= kRatioHi)) pass = false;
    }
    all_pass = all_pass && pass;

    Json one;
    one["config"] = c;
    one["curvature"] = config.curvature;
    one["max_delta"] = config.max_delta;
    one["rows"] = std::move(rows);
    one["pass"] = pass;
    configs.push_back(std::move(one));
  }

  std::string content;
  if (opt.format == "json") {
    Json doc;
    doc["command"] = "perturb-check";
    doc["dims"] = {dims.l, dims.m, dims.n};
    doc["seed"] = seed;
    doc["deltas"] = ladder;
    doc["ratio_band"] = {kRatioLo, kRatioHi};
    doc["configs"] = std::move(configs);
    doc["summary"] = Json{{"all_pass", all_pass}};
    content = doc.dump(2) + "\n";
  } else if (opt.format == "csv") {
    content = csv.str();
  } else {
    throw UsageError("--format: expected json or csv");
  }

  write_output(content, opt.output);
  return all_pass ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral checks and entropy-functional minimization for "
               "tripartite density matrices"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand(
      "verify", "majorization, rank and entropy-gap checks over states");
  verify->add_option("--dims", vopt.dims_text, "subsystem dimensions L,M,N");
  verify->add_option("--states", vopt.states, "number of generated states");
  std::optional<std::uint64_t> vseed;
  verify->add_option("--seed", vseed, "master seed (fallback: SSALAB_SEED)");
  verify->add_option("--generator", vopt.generator,
                     "state kind (ginibre_full, ginibre_rank, pure_random, "
                     "ghz, w, lemma2_construct)");
  verify->add_option("--rank", vopt.rank, "rank for ginibre_rank");
  verify->add_option("--zeros", vopt.zeros, "zeros for lemma2_construct");
  verify->add_option("--genspec", vopt.genspec, "inline JSON generator spec");
  verify->add_option("--input", vopt.input, "density-matrix JSON file");
  verify->add_option("--tolerance", vopt.tolerance, "majorization tolerance");
  verify->add_option("--threshold", vopt.threshold, "rank threshold");
  verify->add_option("--output", vopt.output, "report path (default stdout)");
  verify->add_option("--format", vopt.format, "json or csv");

  MinimizeOptions mopt;
  CLI::App* minimize = app.add_subcommand(
      "minimize", "multi-start minimization of the entropy functional");
  minimize->add_option("--dims", mopt.dims_text, "subsystem dimensions L,M,N");
  minimize->add_option("--restarts", mopt.restarts, "descent restarts");
  minimize->add_option("--oracle", mopt.oracle, "oracle samples per pattern");
  std::optional<std::uint64_t> mseed;
  minimize->add_option("--seed", mseed, "master seed (fallback: SSALAB_SEED)");
  minimize->add_option("--patterns", mopt.patterns,
                       "semicolon list: 'full' or zabc,zbc,zab,zb");
  minimize->add_option("--tolerance", mopt.tolerance, "majorization tolerance");
  minimize->add_option("--threshold", mopt.threshold, "rank threshold");
  minimize->add_option("--output", mopt.output, "report path (default stdout)");
  minimize->add_option("--format", mopt.format, "json or csv");

  PerturbOptions popt;
  CLI::App* perturb = app.add_subcommand(
      "perturb-check", "first-order perturbation identity across a delta ladder");
  perturb->add_option("--dims", popt.dims_text, "subsystem dimensions L,M,N");
  perturb->add_option("--configs", popt.configs, "random configurations");
  perturb->add_option("--deltas", popt.deltas, "comma-separated ladder");
  std::optional<std::uint64_t> pseed;
  perturb->add_option("--seed", pseed, "master seed (fallback: SSALAB_SEED)");
  perturb->add_option("--output", popt.output, "report path (default stdout)");
  perturb->add_option("--format", popt.format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      vopt.seed = vseed;
      return run_verify(vopt);
    }
    if (minimize->parsed()) {
      mopt.seed = mseed;
      return run_minimize(mopt);
    }
    popt.seed = pseed;
    return run_perturb_check(popt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}
