#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "opinionlab/coarse.hpp"
#include "opinionlab/game.hpp"

namespace opinionlab {

using Json = nlohmann::json;

/// Rejects unknown keys so configs fail loudly instead of silently ignoring
/// a misspelled field.
void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                  const std::string& where);

std::string format_sig(double v);  // 12 significant digits
std::string csv_line(const std::vector<double>& values);

Json to_json(const Network& net);
Network network_from_json(const Json& j);

Json to_json(const RuleProfile& rules);
RuleProfile rules_from_json(const Json& j, int n);

Json to_json(const SignalModel& signal);
SignalModel signal_from_json(const Json& j, int n);

Json to_json(const NoiseSpec& noise);
NoiseSpec noise_from_json(const Json& j, int n);

Json to_json(const LossReport& rep);
Json to_json(const LongRunSolution& sol);
Json to_json(const InfluenceDecomposition& d);
Json to_json(const EquilibriumResult& eq);
Json to_json(const Trajectory& t, bool include_path = false);
Json to_json(const NetworkComparisonRow& row);
Json to_json(const PolarizationPoint& p);
Json to_json(const CoarseOutcome& outcome);

std::vector<double> eigen_to_std(const Vector& v);
Vector std_to_eigen(const std::vector<double>& v);

/// FNV-1a of the canonical (dumped) config text; stamped into manifests.
std::uint64_t config_hash(const Json& config);

}  // namespace opinionlab
