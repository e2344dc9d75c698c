#include "ssalab/report_json.hpp"

#include <cmath>

namespace ssalab {

namespace {

Json json_double(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

Json to_json(const MajorizationResult& r) {
  Json j;
  j["holds"] = r.holds;
  j["margin"] = r.min_margin;
  j["margins"] = r.margins;
  return j;
}

Json to_json(const Lemma1Report& r) {
  Json j;
  j["relations"] = Json::array();
  for (const MajorizationResult& rel : r.relations)
    j["relations"].push_back(to_json(rel));
  j["all_hold"] = r.all_hold();
  j["min_margin"] = r.min_margin();
  return j;
}

Json to_json(const Lemma2Report& r) {
  Json j;
  j["applicable"] = r.applicable;
  j["conclusion_holds"] = r.conclusion_holds;
  j["r"] = r.r;
  j["s"] = r.s;
  j["t"] = r.t;
  j["ls_count"] = r.ls_count;
  j["bound"] = r.bound;
  return j;
}

Json to_json(const Condition4Result& r) {
  Json j;
  j["holds"] = r.holds;
  j["margin"] = r.margin;
  j["applicable"] = r.applicable;
  j["zeros"] = {{"abc", r.zeros_abc},
                {"ab", r.zeros_ab},
                {"bc", r.zeros_bc},
                {"b", r.zeros_b}};
  return j;
}

Json to_json(const TheoremReport& r) {
  Json j;
  Json cond3;
  cond3["holds"] = r.cond3_holds();
  cond3["margin"] = r.cond3_margin();
  cond3["bc"] = to_json(r.cond3_bc);
  cond3["ab"] = to_json(r.cond3_ab);
  j["conditions"] = Json::array(
      {to_json(r.cond1), to_json(r.cond2), cond3, to_json(r.cond4)});
  j["all_hold"] = r.all_hold();
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["lemma1"] = to_json(r.lemma1);
  j["lemma2"] = to_json(r.lemma2);
  j["theorem_conditions"] = to_json(r.theorem_conditions);
  j["ssa_gap"] = r.ssa_gap;
  j["subadd_gap"] = r.subadd_gap ? Json(*r.subadd_gap) : Json(nullptr);
  return j;
}

Json to_json(const SpectraTuple& t) {
  Json j;
  j["lambda_abc"] = t.abc().values();
  j["lambda_ab"] = t.ab().values();
  j["lambda_bc"] = t.bc().values();
  j["lambda_b"] = t.b().values();
  return j;
}

Json to_json(const SupportPattern& p) {
  Json j;
  j["zeros_abc"] = p.zeros_abc;
  j["zeros_bc"] = p.zeros_bc;
  j["zeros_ab"] = p.zeros_ab;
  j["zeros_b"] = p.zeros_b;
  return j;
}

Json to_json(const RestartStat& s) {
  Json j;
  j["seed"] = s.seed;
  j["sampler_failed"] = s.sampler_failed;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["start_objective"] = s.sampler_failed ? Json(nullptr) : Json(s.start_objective);
  j["objective"] = s.sampler_failed ? Json(nullptr) : Json(s.objective);
  j["feasibility_residual"] =
      s.sampler_failed ? Json(nullptr) : Json(s.feasibility_residual);
  return j;
}

Json to_json(const MinimizationResult& r) {
  Json j;
  j["converged"] = r.converged;
  j["objective"] = json_double(r.objective);
  j["feasibility_residual"] = json_double(r.feasibility_residual);
  j["uniformity_deviation"] = json_double(r.uniformity_deviation);
  j["restarts"] = r.restarts;
  j["converged_restarts"] = r.converged_restarts;
  j["minimizer"] = r.minimizer ? to_json(*r.minimizer) : Json(nullptr);
  j["restart_stats"] = Json::array();
  for (const RestartStat& s : r.restart_stats)
    j["restart_stats"].push_back(to_json(s));
  return j;
}

Json to_json(const OracleScanResult& r) {
  Json j;
  j["min_f"] = r.min_f;
  j["samples"] = r.samples;
  j["attempts"] = r.attempts;
  j["argmin"] = r.argmin ? to_json(*r.argmin) : Json(nullptr);
  return j;
}

}  // namespace ssalab
