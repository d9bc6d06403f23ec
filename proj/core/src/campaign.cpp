#include "absa/campaign.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "absa/errors.hpp"

namespace absa {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw InvalidSpec("unknown key '" + item.key() + "' in " + section);
  }
}

std::vector<std::string> parse_name_list(const json& value, const std::string& context) {
  if (!value.is_array()) throw InvalidSpec(context + " must be an array of strings");
  std::vector<std::string> names;
  for (const auto& entry : value) {
    if (!entry.is_string()) throw InvalidSpec(context + " must contain only strings");
    names.push_back(entry.get<std::string>());
  }
  return names;
}

SimulatorSpec parse_simulator(const json& obj) {
  check_keys(obj, "simulator",
             {"kind", "command", "working_dir", "timeout_s", "outputs", "parameters"});
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "toy") {
    check_keys(obj, "simulator (toy kind)", {"kind"});
    return SimulatorSpec::toy();
  }
  if (kind != "external")
    throw InvalidSpec("simulator.kind must be 'toy' or 'external', got '" + kind + "'");

  SimulatorSpec spec;
  spec.kind = SimulatorSpec::Kind::external;
  spec.command = obj.at("command").get<std::string>();
  if (obj.contains("working_dir")) spec.working_dir = obj.at("working_dir").get<std::string>();
  if (obj.contains("timeout_s")) spec.timeout_s = obj.at("timeout_s").get<double>();
  spec.outputs = parse_name_list(obj.at("outputs"), "simulator.outputs");
  if (obj.contains("parameters"))
    spec.parameters = parse_name_list(obj.at("parameters"), "simulator.parameters");
  return spec;
}

ParameterSpec parse_parameter(const json& obj) {
  check_keys(obj, "parameters[]", {"name", "min", "max", "calibrated", "values", "value_count"});
  ParameterSpec param;
  param.name = obj.at("name").get<std::string>();
  param.min = obj.at("min").get<double>();
  param.max = obj.at("max").get<double>();
  param.calibrated = obj.at("calibrated").get<double>();
  if (obj.contains("values") && obj.contains("value_count"))
    throw InvalidSpec("parameter '" + param.name + "': give either values or value_count");
  if (obj.contains("values")) {
    for (const auto& v : obj.at("values")) param.values.push_back(v.get<double>());
  } else if (obj.contains("value_count")) {
    // Check the bounds here so grid expansion failures name the parameter.
    if (!std::isfinite(param.min) || !std::isfinite(param.max) ||
        !std::isfinite(param.calibrated))
      throw InvalidSpec("parameter '" + param.name + "': bounds and calibrated must be finite");
    if (!(param.min <= param.max))
      throw InvalidSpec("parameter '" + param.name + "': min must be <= max");
    if (param.calibrated < param.min || param.calibrated > param.max)
      throw InvalidSpec("parameter '" + param.name + "': calibrated value outside [min, max]");
    param.values = evenly_spaced_values(param.min, param.max,
                                        obj.at("value_count").get<std::size_t>(),
                                        param.calibrated);
  }
  return param;
}

LhsCriterion parse_criterion(const std::string& text) {
  if (text == "none") return LhsCriterion::none;
  if (text == "maximin") return LhsCriterion::maximin;
  throw InvalidSpec("lhs.criterion must be 'none' or 'maximin', got '" + text + "'");
}

std::string criterion_name(LhsCriterion criterion) {
  return criterion == LhsCriterion::maximin ? "maximin" : "none";
}

CorrelationScheme parse_scheme(const json& obj) {
  check_keys(obj, "correlation_scheme", {"kind", "sample_count"});
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "mukaka") return CorrelationScheme::mukaka();
  if (kind == "schober") return CorrelationScheme::schober();
  if (kind == "krehbiel") {
    std::size_t count = 0;  // resolved to the design size when it runs
    if (obj.contains("sample_count")) count = obj.at("sample_count").get<std::size_t>();
    return CorrelationScheme::krehbiel(count);
  }
  throw InvalidSpec("correlation_scheme.kind must be 'mukaka', 'schober', or 'krehbiel', got '" +
                    kind + "'");
}

std::string scheme_name(CorrelationScheme::Kind kind) {
  switch (kind) {
    case CorrelationScheme::Kind::mukaka: return "mukaka";
    case CorrelationScheme::Kind::schober: return "schober";
    case CorrelationScheme::Kind::krehbiel: return "krehbiel";
  }
  return "mukaka";
}

CampaignConfig build_config(const json& doc) {
  check_keys(doc, "config",
             {"simulator", "outputs", "parameters", "fixed", "consistency", "robustness", "lhs",
              "master_seed", "parallelism", "out_dir", "significance", "correlation_scheme"});

  CampaignConfig config;
  if (doc.contains("simulator")) config.simulator = parse_simulator(doc.at("simulator"));
  config.outputs = doc.contains("outputs")
                       ? parse_name_list(doc.at("outputs"), "outputs")
                       : config.simulator.outputs;

  if (doc.contains("parameters")) {
    if (!doc.at("parameters").is_array()) throw InvalidSpec("parameters must be an array");
    for (const auto& entry : doc.at("parameters"))
      config.parameters.push_back(parse_parameter(entry));
  }
  if (doc.contains("fixed")) {
    if (!doc.at("fixed").is_object()) throw InvalidSpec("fixed must be an object");
    for (const auto& item : doc.at("fixed").items())
      config.fixed[item.key()] = item.value().get<double>();
  }

  if (doc.contains("consistency")) {
    const json& c = doc.at("consistency");
    check_keys(c, "consistency", {"sizes", "group_count", "threshold"});
    if (c.contains("sizes")) {
      config.consistency.sizes.clear();
      for (const auto& v : c.at("sizes"))
        config.consistency.sizes.push_back(v.get<std::size_t>());
    }
    if (c.contains("group_count"))
      config.consistency.group_count = c.at("group_count").get<std::size_t>();
    if (c.contains("threshold")) config.consistency.threshold = c.at("threshold").get<double>();
  }

  if (doc.contains("robustness")) {
    const json& r = doc.at("robustness");
    check_keys(r, "robustness", {"n_star"});
    if (r.contains("n_star") && !r.at("n_star").is_null())
      config.robustness.n_star = r.at("n_star").get<std::size_t>();
  }

  if (doc.contains("lhs")) {
    const json& l = doc.at("lhs");
    check_keys(l, "lhs", {"n_points", "criterion", "candidates"});
    config.lhs.n_points = l.at("n_points").get<std::size_t>();
    if (l.contains("criterion"))
      config.lhs.criterion = parse_criterion(l.at("criterion").get<std::string>());
    if (l.contains("candidates")) config.lhs.candidates = l.at("candidates").get<std::size_t>();
  }

  if (doc.contains("master_seed")) config.master_seed = doc.at("master_seed").get<std::uint64_t>();
  if (doc.contains("parallelism")) config.parallelism = doc.at("parallelism").get<unsigned>();
  if (doc.contains("out_dir")) config.out_dir = doc.at("out_dir").get<std::string>();

  if (doc.contains("significance")) {
    const json& s = doc.at("significance");
    check_keys(s, "significance", {"small_max", "medium_max"});
    if (s.contains("small_max")) config.significance.small_max = s.at("small_max").get<double>();
    if (s.contains("medium_max"))
      config.significance.medium_max = s.at("medium_max").get<double>();
  }

  if (doc.contains("correlation_scheme"))
    config.correlation = parse_scheme(doc.at("correlation_scheme"));
  return config;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw IoFailure("SHA-256 digest failed");
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0x0f]);
  }
  return out;
}

}  // namespace

std::map<std::string, double> CampaignConfig::calibrated_point() const {
  std::map<std::string, double> point = fixed;
  for (const auto& param : parameters) point[param.name] = param.calibrated;
  return point;
}

void CampaignConfig::validate() const {
  simulator.validate();

  if (outputs.empty()) throw InvalidSpec("config must name at least one output");
  std::set<std::string> seen_outputs;
  for (const auto& output : outputs) {
    if (!seen_outputs.insert(output).second)
      throw InvalidSpec("output '" + output + "' listed twice");
    if (std::find(simulator.outputs.begin(), simulator.outputs.end(), output) ==
        simulator.outputs.end())
      throw InvalidSpec("output '" + output + "' is not declared by the simulator");
  }

  std::set<std::string> seen_params;
  for (const auto& param : parameters) {
    if (param.name.empty()) throw InvalidSpec("parameter name must not be empty");
    if (!seen_params.insert(param.name).second)
      throw InvalidSpec("parameter '" + param.name + "' listed twice");
    if (std::find(simulator.parameters.begin(), simulator.parameters.end(), param.name) ==
        simulator.parameters.end())
      throw InvalidSpec("parameter '" + param.name + "' is not declared by the simulator");
    if (!std::isfinite(param.min) || !std::isfinite(param.max) ||
        !std::isfinite(param.calibrated))
      throw InvalidSpec("parameter '" + param.name + "': bounds and calibrated must be finite");
    if (!(param.min <= param.max))
      throw InvalidSpec("parameter '" + param.name + "': min must be <= max");
    if (param.calibrated < param.min || param.calibrated > param.max)
      throw InvalidSpec("parameter '" + param.name + "': calibrated value outside [min, max]");
    if (!param.values.empty()) param.validate();
  }

  for (const auto& [name, value] : fixed) {
    if (seen_params.count(name))
      throw InvalidSpec("parameter '" + name + "' is both analyzed and fixed");
    if (std::find(simulator.parameters.begin(), simulator.parameters.end(), name) ==
        simulator.parameters.end())
      throw InvalidSpec("fixed parameter '" + name + "' is not declared by the simulator");
    if (!std::isfinite(value))
      throw InvalidSpec("fixed parameter '" + name + "' must have a finite value");
  }
  for (const auto& name : simulator.parameters) {
    if (!seen_params.count(name) && !fixed.count(name))
      throw InvalidSpec("declared parameter '" + name + "' has neither a spec nor a fixed value");
  }

  if (consistency.sizes.empty()) throw InvalidSpec("consistency.sizes must not be empty");
  for (std::size_t i = 0; i < consistency.sizes.size(); ++i) {
    if (consistency.sizes[i] < 1) throw InvalidSpec("consistency.sizes entries must be >= 1");
    if (i > 0 && consistency.sizes[i] <= consistency.sizes[i - 1])
      throw InvalidSpec("consistency.sizes must be strictly ascending");
  }
  if (consistency.group_count < 2) throw InvalidSpec("consistency.group_count must be >= 2");
  if (!(consistency.threshold > 0.5 && consistency.threshold <= 1.0))
    throw InvalidSpec("consistency.threshold must lie in (0.5, 1]");

  if (robustness.n_star && *robustness.n_star < 1)
    throw InvalidSpec("robustness.n_star must be >= 1");
  if (lhs.candidates < 1) throw InvalidSpec("lhs.candidates must be >= 1");

  if (!(significance.small_max > 0.5 && significance.small_max < significance.medium_max &&
        significance.medium_max <= 1.0))
    throw InvalidSpec("significance thresholds must satisfy 0.5 < small_max < medium_max <= 1");

  if (parallelism < 1) throw InvalidSpec("parallelism must be >= 1");
}

CampaignConfig load_campaign_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoFailure("cannot open config file " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoFailure("cannot read config file " + file.string());
  return parse_campaign_config(buffer.str(), file.string());
}

CampaignConfig parse_campaign_config(const std::string& json_text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw InvalidSpec(origin + ": top level must be a JSON object");
  try {
    CampaignConfig config = build_config(doc);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw InvalidSpec(origin + ": " + e.what());
  } catch (const InvalidSpec& e) {
    throw InvalidSpec(origin + ": " + e.what());
  }
}

std::string canonical_config_json(const CampaignConfig& config) {
  json j;
  j["simulator"]["kind"] = config.simulator.kind == SimulatorSpec::Kind::toy ? "toy" : "external";
  j["simulator"]["command"] = config.simulator.command;
  j["simulator"]["working_dir"] = config.simulator.working_dir;
  j["simulator"]["timeout_s"] = config.simulator.timeout_s;
  j["simulator"]["outputs"] = config.simulator.outputs;
  j["simulator"]["parameters"] = config.simulator.parameters;
  j["outputs"] = config.outputs;
  j["parameters"] = json::array();
  for (const auto& param : config.parameters) {
    json p;
    p["name"] = param.name;
    p["min"] = param.min;
    p["max"] = param.max;
    p["calibrated"] = param.calibrated;
    p["values"] = param.values;
    j["parameters"].push_back(std::move(p));
  }
  j["fixed"] = config.fixed;
  j["consistency"]["sizes"] = config.consistency.sizes;
  j["consistency"]["group_count"] = config.consistency.group_count;
  j["consistency"]["threshold"] = config.consistency.threshold;
  if (config.robustness.n_star)
    j["robustness"]["n_star"] = *config.robustness.n_star;
  else
    j["robustness"]["n_star"] = nullptr;
  j["lhs"]["n_points"] = config.lhs.n_points;
  j["lhs"]["criterion"] = criterion_name(config.lhs.criterion);
  j["lhs"]["candidates"] = config.lhs.candidates;
  j["master_seed"] = config.master_seed;
  j["significance"]["small_max"] = config.significance.small_max;
  j["significance"]["medium_max"] = config.significance.medium_max;
  j["correlation_scheme"]["kind"] = scheme_name(config.correlation.kind);
  j["correlation_scheme"]["sample_count"] = config.correlation.sample_count;
  return j.dump();
}

std::string config_hash(const CampaignConfig& config) {
  return sha256_hex(canonical_config_json(config));
}

CampaignConfig demo_config() {
  CampaignConfig config;
  config.simulator = SimulatorSpec::toy();
  config.outputs = config.simulator.outputs;

  ParameterSpec pi_ds;
  pi_ds.name = "pi_ds";
  pi_ds.min = 0.675;
  pi_ds.max = 0.825;
  pi_ds.calibrated = 0.75;
  pi_ds.values = evenly_spaced_values(pi_ds.min, pi_ds.max, 5, pi_ds.calibrated);

  ParameterSpec ec50;
  ec50.name = "ec50";
  ec50.min = 0.25;
  ec50.max = 1.75;
  ec50.calibrated = 1.0;
  ec50.values = evenly_spaced_values(ec50.min, ec50.max, 5, ec50.calibrated);

  ParameterSpec gamma;
  gamma.name = "gamma";
  gamma.min = 1.0;
  gamma.max = 3.0;
  gamma.calibrated = 2.0;
  gamma.values = evenly_spaced_values(gamma.min, gamma.max, 5, gamma.calibrated);

  config.parameters = {pi_ds, ec50, gamma};
  config.consistency.sizes = {1, 5, 20, 50};
  config.consistency.group_count = 10;
  config.consistency.threshold = 0.56;
  config.lhs.n_points = 50;
  config.lhs.criterion = LhsCriterion::maximin;
  config.lhs.candidates = 5;
  config.master_seed = 1;
  config.parallelism = 1;
  return config;
}

}  // namespace absa
