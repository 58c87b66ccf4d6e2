#include "ginidep/report.hpp"

#include <json.hpp>

namespace ginidep {

std::string to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["statistic"] = report.statistic_name;
  j["value"] = report.value;
  j["threshold"] = report.threshold;
  j["p_value"] = report.p_value ? nlohmann::ordered_json(*report.p_value) : nullptr;
  j["decision"] = std::string(to_string(report.decision));
  j["alpha"] = report.alpha;
  j["n"] = report.n;
  j["permutations"] =
      report.permutations ? nlohmann::ordered_json(*report.permutations) : nullptr;
  j["seed"] = report.seed;
  return j.dump(2) + "\n";
}

std::string to_json(const PowerReport& report) {
  nlohmann::ordered_json j;
  auto& cfg = j["config"];
  cfg["family"] = std::string(to_string(report.config.family));
  cfg["k"] = report.config.classes;
  cfg["n"] = report.config.n;
  cfg["m"] = report.config.m;
  cfg["sigma2"] = report.config.kernel.sigma2();
  cfg["alpha"] = report.config.alpha;
  cfg["seed"] = report.config.seed;
  j["per_statistic"] = nlohmann::ordered_json::object();
  j["critical_values"] = nlohmann::ordered_json::object();
  for (const auto& s : report.per_statistic) {
    const std::string name(to_string(s.statistic));
    j["per_statistic"][name] = {{"power", s.power}, {"auc", s.auc}};
    j["critical_values"][name] = s.critical_value;
  }
  return j.dump(2) + "\n";
}

}  // namespace ginidep
