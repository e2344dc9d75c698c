// report_json.hpp — JSON views of the condition reports, minimization
// results and spectra tuples. Field names are stable; doubles serialize in
// shortest round-trip form, so identical inputs produce identical bytes.

#pragma once

#include <json.hpp>

#include "ssalab/conditions.hpp"
#include "ssalab/minimizer.hpp"

namespace ssalab {

using Json = nlohmann::ordered_json;

Json to_json(const MajorizationResult& r);
Json to_json(const Lemma1Report& r);
Json to_json(const Lemma2Report& r);
Json to_json(const Condition4Result& r);
Json to_json(const TheoremReport& r);
Json to_json(const ConditionReport& r);
Json to_json(const SpectraTuple& t);
Json to_json(const SupportPattern& p);
Json to_json(const RestartStat& s);
Json to_json(const MinimizationResult& r);
Json to_json(const OracleScanResult& r);

}  // namespace ssalab
