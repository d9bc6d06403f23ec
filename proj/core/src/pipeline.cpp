#include "absa/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "absa/campaign_store.hpp"
#include "absa/errors.hpp"
#include "absa/svg.hpp"

namespace absa {

namespace {

using nlohmann::json;

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoFailure("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoFailure("cannot move " + tmp.string() + " to " + file.string());
}

std::filesystem::path make_bundle_dir(const std::filesystem::path& out_dir,
                                      const std::string& stage) {
  if (out_dir.empty()) throw InvalidSpec("output directory must be set");
  const std::filesystem::path dir = out_dir / stage;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::string short_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

json a_measure_json(const AMeasureResult& a) {
  json j;
  j["a_hat"] = a.a_hat;
  j["a_scaled"] = a.a_scaled;
  j["significance"] = to_string(a.significance);
  j["m"] = a.m;
  j["n"] = a.n;
  return j;
}

json boxplot_json(const BoxplotSummary& b) {
  json j;
  j["median"] = b.median;
  j["q1"] = b.q1;
  j["q3"] = b.q3;
  j["whisker_low"] = b.whisker_low;
  j["whisker_high"] = b.whisker_high;
  j["outliers"] = b.outliers;
  return j;
}

json report_header(const char* kind, const CampaignConfig& config, std::uint64_t master_seed) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = kind;
  j["config_hash"] = config_hash(config);
  j["master_seed"] = master_seed;
  return j;
}

json load_json_report(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoFailure("cannot read " + file.string());
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw InvalidSpec(file.string() + ": " + e.what());
  }
}

}  // namespace

ConsistencyReport write_consistency_report(const CampaignConfig& config,
                                           const ReportOptions& options) {
  config.validate();
  const std::uint64_t master_seed = options.master_seed.value_or(config.master_seed);
  const unsigned parallelism = options.parallelism.value_or(config.parallelism);
  const std::filesystem::path dir = make_bundle_dir(options.out_dir, "consistency");

  ConsistencyConfig analysis_config;
  analysis_config.sizes = config.consistency.sizes;
  analysis_config.group_count = config.consistency.group_count;
  analysis_config.outputs = config.outputs;
  analysis_config.threshold = config.consistency.threshold;
  analysis_config.master_seed = master_seed;

  ConsistencyRunOptions run_options;
  run_options.calibrated = config.calibrated_point();
  run_options.parallelism = parallelism;
  run_options.csv_file = dir / "runs.csv";
  run_options.thresholds = config.significance;

  const auto sim = make_simulator(config.simulator);
  ConsistencyResult analysis = run_consistency(*sim, analysis_config, run_options);

  json j = report_header("consistency", config, master_seed);
  j["threshold"] = analysis.threshold;
  j["sizes"] = analysis.sizes;
  j["outputs"] = analysis.outputs;
  j["total_runs"] = analysis.total_runs;
  j["groups"] = json::array();
  for (const auto& group : analysis.groups) {
    json g;
    g["size"] = group.size;
    g["output"] = group.output;
    g["max_scaled_a"] = group.max_scaled_a;
    g["comparisons"] = json::array();
    for (const auto& a : group.comparisons) g["comparisons"].push_back(a_measure_json(a));
    j["groups"].push_back(std::move(g));
  }
  j["n_star_per_output"] = json::object();
  for (const auto& [output, n] : analysis.n_star_per_output) {
    if (n)
      j["n_star_per_output"][output] = *n;
    else
      j["n_star_per_output"][output] = nullptr;
  }
  if (analysis.n_star_overall)
    j["n_star_overall"] = *analysis.n_star_overall;
  else
    j["n_star_overall"] = nullptr;
  write_text_file(dir / "results.json", j.dump(2) + "\n");

  LineChart chart;
  chart.title = "Maximum scaled A-measure by distribution size";
  chart.x_label = "distribution size n";
  chart.y_label = "max scaled A-measure";
  chart.guides = {analysis.threshold};
  for (const auto& output : analysis.outputs) {
    ChartSeries series;
    series.name = output;
    for (const auto& group : analysis.groups) {
      if (group.output == output)
        series.points.emplace_back(static_cast<double>(group.size), group.max_scaled_a);
    }
    chart.series.push_back(std::move(series));
  }
  write_text_file(dir / "max_scaled_a.svg", render_line_chart(chart));

  return {std::move(analysis), dir};
}

RobustnessReport write_robustness_report(const CampaignConfig& config,
                                         const ReportOptions& options) {
  config.validate();
  const std::size_t n_star = resolve_n_star(config, options);
  const std::uint64_t master_seed = options.master_seed.value_or(config.master_seed);
  const unsigned parallelism = options.parallelism.value_or(config.parallelism);

  if (config.parameters.empty())
    throw InvalidSpec("robustness requires at least one analyzed parameter");
  for (const auto& param : config.parameters) {
    if (param.values.empty())
      throw InvalidSpec("parameter '" + param.name +
                        "' has no sweep values; set values or value_count");
  }

  const std::filesystem::path dir = make_bundle_dir(options.out_dir, "robustness");

  RobustnessRunOptions run_options;
  run_options.parallelism = parallelism;
  run_options.csv_file = dir / "runs.csv";
  run_options.thresholds = config.significance;
  run_options.extra_calibrated = config.fixed;

  const auto sim = make_simulator(config.simulator);
  RobustnessResult analysis =
      run_robustness(*sim, config.parameters, n_star, config.outputs, master_seed, run_options);

  json j = report_header("robustness", config, master_seed);
  j["n_star_used"] = analysis.n_star_used;
  j["total_distributions"] = analysis.total_distributions;
  j["outputs"] = analysis.outputs;
  j["entries"] = json::array();
  for (const auto& entry : analysis.entries) {
    json e;
    e["parameter"] = entry.parameter;
    e["value"] = entry.value;
    e["is_calibrated"] = entry.is_calibrated;
    e["a"] = json::object();
    for (const auto& [output, a] : entry.a) e["a"][output] = a_measure_json(a);
    e["boxplots"] = json::object();
    for (const auto& [output, box] : entry.boxplots) e["boxplots"][output] = boxplot_json(box);
    j["entries"].push_back(std::move(e));
  }
  write_text_file(dir / "results.json", j.dump(2) + "\n");

  for (const auto& param : config.parameters) {
    const std::string stem = sanitize_filename(param.name);

    std::ostringstream csv;
    csv << "value";
    for (const auto& output : analysis.outputs)
      csv << "," << output << "_a_hat," << output << "_a_scaled," << output << "_class";
    csv << "\n";
    std::vector<std::vector<SignificancePoint>> curves;
    for (const auto& output : analysis.outputs)
      curves.push_back(significance_curve(analysis, param.name, output));
    for (std::size_t row = 0; row < curves.front().size(); ++row) {
      csv << format_run_value(curves.front()[row].value);
      for (const auto& curve : curves) {
        csv << "," << format_run_value(curve[row].a_hat) << ","
            << format_run_value(curve[row].a_scaled) << "," << to_string(curve[row].significance);
      }
      csv << "\n";
    }
    write_text_file(dir / ("significance_" + stem + ".csv"), csv.str());

    LineChart chart;
    chart.title = "Scaled A-measure across " + param.name;
    chart.x_label = param.name;
    chart.y_label = "scaled A-measure";
    chart.guides = {config.significance.small_max, config.significance.medium_max, 0.71};
    for (std::size_t c = 0; c < curves.size(); ++c) {
      ChartSeries series;
      series.name = analysis.outputs[c];
      for (const auto& point : curves[c]) series.points.emplace_back(point.value, point.a_scaled);
      chart.series.push_back(std::move(series));
    }
    write_text_file(dir / ("a_vs_value_" + stem + ".svg"), render_line_chart(chart));

    for (const auto& output : analysis.outputs) {
      BoxplotChart boxes;
      boxes.title = output + " across " + param.name;
      boxes.x_label = param.name;
      boxes.y_label = output;
      std::size_t index = 0;
      for (const auto& entry : analysis.entries) {
        if (entry.parameter != param.name) continue;
        boxes.labels.push_back(short_value(entry.value));
        boxes.boxes.push_back(entry.boxplots.at(output));
        if (entry.is_calibrated) boxes.highlight = index;
        ++index;
      }
      write_text_file(dir / ("boxplots_" + stem + "_" + sanitize_filename(output) + ".svg"),
                      render_boxplot_chart(boxes));
    }
  }

  return {std::move(analysis), dir};
}

LhsReport write_lhs_report(const CampaignConfig& config, const ReportOptions& options) {
  config.validate();
  if (config.lhs.n_points < 1)
    throw InvalidSpec("lhs.n_points must be set to a positive point count");
  if (config.parameters.empty())
    throw InvalidSpec("hypercube sampling requires at least one analyzed parameter");
  const std::size_t n_star = resolve_n_star(config, options);
  const std::uint64_t master_seed = options.master_seed.value_or(config.master_seed);
  const unsigned parallelism = options.parallelism.value_or(config.parallelism);
  const std::filesystem::path dir = make_bundle_dir(options.out_dir, "lhs");

  LhsRunOptions run_options;
  run_options.criterion = config.lhs.criterion;
  run_options.candidates = config.lhs.candidates;
  run_options.parallelism = parallelism;
  run_options.csv_file = dir / "runs.csv";
  run_options.scheme = config.correlation;
  run_options.extra_calibrated = config.fixed;

  const auto sim = make_simulator(config.simulator);
  LhsResult analysis = run_lhs(*sim, config.parameters, config.lhs.n_points, n_star,
                               config.outputs, master_seed, run_options);

  json j = report_header("lhs", config, master_seed);
  j["n_points"] = analysis.design.n_points;
  j["q"] = analysis.design.q;
  j["n_star_used"] = analysis.n_star_used;
  j["design"]["seed"] = analysis.design.seed;
  j["design"]["criterion"] =
      analysis.design.criterion == LhsCriterion::maximin ? "maximin" : "none";
  j["design"]["candidates"] = analysis.design.candidates;
  j["parameters"] = json::array();
  for (const auto& param : config.parameters) j["parameters"].push_back(param.name);
  j["outputs"] = config.outputs;
  j["points"] = analysis.points;
  j["medians"] = json::array();
  for (const auto& point_medians : analysis.medians) j["medians"].push_back(point_medians);
  j["correlations"] = json::array();
  for (const auto& entry : analysis.correlations) {
    json c;
    c["parameter"] = entry.parameter;
    c["output"] = entry.output;
    if (entry.r)
      c["r"] = *entry.r;
    else
      c["r"] = nullptr;
    c["descriptor"] = entry.descriptor;
    j["correlations"].push_back(std::move(c));
  }
  j["scheme"]["kind"] = analysis.scheme.kind == CorrelationScheme::Kind::mukaka    ? "mukaka"
                        : analysis.scheme.kind == CorrelationScheme::Kind::schober ? "schober"
                                                                                   : "krehbiel";
  j["scheme"]["sample_count"] = analysis.scheme.sample_count;
  write_text_file(dir / "results.json", j.dump(2) + "\n");

  std::ostringstream design_csv;
  design_csv << "point";
  for (const auto& param : config.parameters) design_csv << "," << param.name;
  design_csv << "\n";
  for (std::size_t row = 0; row < analysis.points.size(); ++row) {
    design_csv << (row + 1);
    for (double v : analysis.points[row]) design_csv << "," << format_run_value(v);
    design_csv << "\n";
  }
  write_text_file(dir / "design.csv", design_csv.str());

  std::ostringstream medians_csv;
  medians_csv << "point";
  for (const auto& param : config.parameters) medians_csv << "," << param.name;
  for (const auto& output : config.outputs) medians_csv << "," << output;
  medians_csv << "\n";
  for (std::size_t row = 0; row < analysis.points.size(); ++row) {
    medians_csv << (row + 1);
    for (double v : analysis.points[row]) medians_csv << "," << format_run_value(v);
    for (const auto& output : config.outputs)
      medians_csv << "," << format_run_value(analysis.medians[row].at(output));
    medians_csv << "\n";
  }
  write_text_file(dir / "medians.csv", medians_csv.str());

  std::ostringstream corr_csv;
  corr_csv << "parameter,output,r,descriptor\n";
  for (const auto& entry : analysis.correlations) {
    corr_csv << entry.parameter << "," << entry.output << ",";
    if (entry.r) corr_csv << format_run_value(*entry.r);
    corr_csv << "," << entry.descriptor << "\n";
  }
  write_text_file(dir / "correlations.csv", corr_csv.str());

  for (std::size_t col = 0; col < config.parameters.size(); ++col) {
    const std::string& param = config.parameters[col].name;
    for (const auto& output : config.outputs) {
      ScatterChart chart;
      chart.title = output + " medians across " + param;
      chart.x_label = param;
      chart.y_label = "median " + output;
      for (std::size_t row = 0; row < analysis.points.size(); ++row)
        chart.points.emplace_back(analysis.points[row][col], analysis.medians[row].at(output));
      for (const auto& entry : analysis.correlations) {
        if (entry.parameter != param || entry.output != output) continue;
        if (entry.r) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "r = %.3f (%s)", *entry.r, entry.descriptor.c_str());
          chart.annotation = buf;
        } else {
          chart.annotation = "r undefined (" + entry.descriptor + ")";
        }
      }
      write_text_file(
          dir / ("scatter_" + sanitize_filename(param) + "_" + sanitize_filename(output) + ".svg"),
          render_scatter_chart(chart));
    }
  }

  return {std::move(analysis), dir};
}

DemoReport write_demo_report(const CampaignConfig& config, const ReportOptions& options) {
  DemoReport report;
  report.consistency = write_consistency_report(config, options);
  const auto discovered = report.consistency.analysis.n_star_overall;
  report.n_star_reached = discovered.has_value();

  std::size_t n_star = 0;
  if (options.n_star) {
    n_star = *options.n_star;
  } else if (config.robustness.n_star) {
    n_star = *config.robustness.n_star;
  } else if (discovered) {
    n_star = *discovered;
  } else {
    n_star = config.consistency.sizes.back();
    report.warnings.push_back(
        "consistency never brought the worst-case scaled A-measure under " +
        short_value(config.consistency.threshold) + " within the tested sizes; continuing with " +
        "the largest tested size n = " + std::to_string(n_star));
  }
  report.n_star_used = n_star;

  ReportOptions stage_options = options;
  stage_options.n_star = n_star;
  report.robustness = write_robustness_report(config, stage_options);
  report.lhs = write_lhs_report(config, stage_options);

  const std::uint64_t master_seed = options.master_seed.value_or(config.master_seed);
  json j = report_header("demo", config, master_seed);
  if (discovered)
    j["n_star_overall"] = *discovered;
  else
    j["n_star_overall"] = nullptr;
  j["n_star_used"] = n_star;
  j["warnings"] = report.warnings;
  j["stages"]["consistency"] = "consistency/results.json";
  j["stages"]["robustness"] = "robustness/results.json";
  j["stages"]["lhs"] = "lhs/results.json";
  write_text_file(options.out_dir / "demo_summary.json", j.dump(2) + "\n");

  return report;
}

std::size_t resolve_n_star(const CampaignConfig& config, const ReportOptions& options) {
  if (options.n_star) {
    if (*options.n_star < 1) throw InvalidSpec("the n_star override must be >= 1");
    return *options.n_star;
  }
  if (config.robustness.n_star) return *config.robustness.n_star;

  const std::filesystem::path file = options.out_dir / "consistency" / "results.json";
  if (!std::filesystem::exists(file))
    throw MissingPrerequisite("no replicate count n* available: pass --n-star, set "
                              "robustness.n_star in the config, or run a consistency analysis "
                              "into the same output directory first (looked for " +
                              file.string() + ")");
  const json j = load_json_report(file);
  if (!j.is_object() || !j.contains("kind") || j.at("kind") != "consistency")
    throw MissingPrerequisite(file.string() + " is not a consistency report");
  if (!j.contains("n_star_overall"))
    throw MissingPrerequisite(file.string() + " carries no n_star_overall field");
  if (j.at("n_star_overall").is_null())
    throw MissingPrerequisite("the consistency analysis at " + file.string() +
                              " did not reach n* within its tested sizes");
  return j.at("n_star_overall").get<std::size_t>();
}

namespace {

void require_key(const json& j, const std::string& file, const char* key) {
  if (!j.contains(key))
    throw InvalidSpec(file + ": missing required field '" + std::string(key) + "'");
}

void validate_a_entry(const json& a, const std::string& file) {
  for (const char* key : {"a_hat", "a_scaled", "significance", "m", "n"}) require_key(a, file, key);
  const double a_hat = a.at("a_hat").get<double>();
  const double a_scaled = a.at("a_scaled").get<double>();
  if (!(a_hat >= 0.0 && a_hat <= 1.0))
    throw InvalidSpec(file + ": a_hat outside [0, 1]");
  if (!(a_scaled >= 0.5 && a_scaled <= 1.0))
    throw InvalidSpec(file + ": a_scaled outside [0.5, 1]");
}

}  // namespace

void validate_report(const std::filesystem::path& results_json) {
  const std::string file = results_json.string();
  const json j = load_json_report(results_json);
  if (!j.is_object()) throw InvalidSpec(file + ": report must be a JSON object");

  require_key(j, file, "schema_version");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != 1)
    throw InvalidSpec(file + ": unsupported schema_version");
  require_key(j, file, "kind");
  const std::string kind = j.at("kind").get<std::string>();
  require_key(j, file, "config_hash");
  const std::string hash = j.at("config_hash").get<std::string>();
  if (hash.size() != 64 || hash.find_first_not_of("0123456789abcdef") != std::string::npos)
    throw InvalidSpec(file + ": config_hash must be 64 lowercase hex digits");
  require_key(j, file, "master_seed");
  if (!j.at("master_seed").is_number_unsigned())
    throw InvalidSpec(file + ": master_seed must be an unsigned integer");

  if (kind == "consistency") {
    for (const char* key : {"threshold", "sizes", "outputs", "total_runs", "groups",
                            "n_star_per_output", "n_star_overall"})
      require_key(j, file, key);
    const double threshold = j.at("threshold").get<double>();
    if (!(threshold > 0.5 && threshold <= 1.0))
      throw InvalidSpec(file + ": threshold outside (0.5, 1]");
    for (const auto& group : j.at("groups")) {
      for (const char* key : {"size", "output", "max_scaled_a", "comparisons"})
        require_key(group, file, key);
      const double max_scaled = group.at("max_scaled_a").get<double>();
      if (!(max_scaled >= 0.5 && max_scaled <= 1.0))
        throw InvalidSpec(file + ": max_scaled_a outside [0.5, 1]");
      for (const auto& a : group.at("comparisons")) validate_a_entry(a, file);
    }
  } else if (kind == "robustness") {
    for (const char* key : {"n_star_used", "total_distributions", "outputs", "entries"})
      require_key(j, file, key);
    if (j.at("n_star_used").get<std::size_t>() < 1)
      throw InvalidSpec(file + ": n_star_used must be >= 1");
    for (const auto& entry : j.at("entries")) {
      for (const char* key : {"parameter", "value", "is_calibrated", "a", "boxplots"})
        require_key(entry, file, key);
      for (const auto& item : entry.at("a").items()) validate_a_entry(item.value(), file);
      for (const auto& item : entry.at("boxplots").items()) {
        for (const char* key : {"median", "q1", "q3", "whisker_low", "whisker_high", "outliers"})
          require_key(item.value(), file, key);
      }
    }
  } else if (kind == "lhs") {
    for (const char* key :
         {"n_points", "q", "n_star_used", "design", "parameters", "outputs", "points", "medians",
          "correlations", "scheme"})
      require_key(j, file, key);
    const std::size_t n_points = j.at("n_points").get<std::size_t>();
    if (j.at("points").size() != n_points || j.at("medians").size() != n_points)
      throw InvalidSpec(file + ": points and medians must have one row per sampling point");
    for (const auto& entry : j.at("correlations")) {
      for (const char* key : {"parameter", "output", "r", "descriptor"})
        require_key(entry, file, key);
      if (!entry.at("r").is_null()) {
        const double r = entry.at("r").get<double>();
        if (!(r >= -1.0 && r <= 1.0)) throw InvalidSpec(file + ": correlation outside [-1, 1]");
      }
    }
  } else if (kind == "demo") {
    for (const char* key : {"n_star_overall", "n_star_used", "warnings", "stages"})
      require_key(j, file, key);
  } else {
    throw InvalidSpec(file + ": unknown report kind '" + kind + "'");
  }
}

}  // namespace absa
