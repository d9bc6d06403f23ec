#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "absa/campaign.hpp"
#include "absa/distribution.hpp"
#include "absa/errors.hpp"
#include "absa/pipeline.hpp"
#include "absa/stats.hpp"

namespace {

std::vector<double> read_sample_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw absa::IoFailure("cannot open " + path);
  std::vector<double> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t");
    const std::string token = line.substr(begin, end - begin + 1);
    errno = 0;
    char* parse_end = nullptr;
    const double value = std::strtod(token.c_str(), &parse_end);
    if (parse_end != token.c_str() + token.size() || !std::isfinite(value))
      throw absa::InvalidSpec(path + ": line " + std::to_string(line_no) + ": cannot parse '" +
                              token + "' as a finite number");
    samples.push_back(value);
  }
  if (samples.empty()) throw absa::InvalidSpec(path + ": no samples (file is empty)");
  return samples;
}

int run_ameasure(const std::string& file_b, const std::string& file_c) {
  const absa::Distribution b(read_sample_file(file_b));
  const absa::Distribution c(read_sample_file(file_c));
  const absa::AMeasureResult result = absa::a_measure(b, c);
  nlohmann::json j;
  j["a_hat"] = result.a_hat;
  j["a_scaled"] = result.a_scaled;
  j["significance"] = absa::to_string(result.significance);
  j["m"] = result.m;
  j["n"] = result.n;
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct CampaignCli {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> master_seed;
  std::optional<unsigned> parallelism;
  std::optional<std::size_t> n_star;
};

void add_campaign_options(CLI::App* cmd, CampaignCli& args, bool config_required,
                          bool with_n_star) {
  auto* config_option =
      cmd->add_option("--config", args.config_path, "Campaign config JSON file");
  if (config_required) config_option->required();
  cmd->add_option("--out", args.out_dir,
                  "Output directory (default: ABSA_OUT, then the config's out_dir, "
                  "then ./absa-out)");
  cmd->add_option("--master-seed", args.master_seed, "Master seed override");
  cmd->add_option("--parallelism", args.parallelism, "Concurrent simulation runs");
  if (with_n_star)
    cmd->add_option("--n-star", args.n_star,
                    "Replicate count override (skips the consistency prerequisite)");
}

std::filesystem::path resolve_out_dir(const CampaignCli& args,
                                      const absa::CampaignConfig& config) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("ABSA_OUT"); env && *env) return env;
  if (!config.out_dir.empty()) return config.out_dir;
  return "absa-out";
}

absa::ReportOptions make_report_options(const CampaignCli& args,
                                        const absa::CampaignConfig& config) {
  absa::ReportOptions options;
  options.out_dir = resolve_out_dir(args, config);
  options.master_seed = args.master_seed;
  options.parallelism = args.parallelism;
  options.n_star = args.n_star;
  return options;
}

std::string n_star_text(const std::optional<std::size_t>& n_star) {
  return n_star ? std::to_string(*n_star) : std::string("not reached");
}

void print_consistency_summary(const absa::ConsistencyReport& report) {
  const auto& analysis = report.analysis;
  std::cout << "consistency bundle: " << report.dir.string() << "\n";
  std::cout << "total runs: " << analysis.total_runs << "\n";
  for (const auto& [output, n_star] : analysis.n_star_per_output)
    std::cout << "n* for " << output << ": " << n_star_text(n_star) << "\n";
  std::cout << "n* overall: " << n_star_text(analysis.n_star_overall) << "\n";
}

void print_robustness_summary(const absa::RobustnessReport& report) {
  std::cout << "robustness bundle: " << report.dir.string() << "\n";
  std::cout << "replicates per distribution: " << report.analysis.n_star_used << "\n";
  std::cout << "perturbed distributions: " << report.analysis.total_distributions << "\n";
}

void print_lhs_summary(const absa::LhsReport& report) {
  std::cout << "lhs bundle: " << report.dir.string() << "\n";
  std::cout << "sampling points: " << report.analysis.design.n_points
            << ", replicates per point: " << report.analysis.n_star_used << "\n";
  for (const auto& entry : report.analysis.correlations) {
    std::cout << "r(" << entry.parameter << ", " << entry.output << ") = ";
    if (entry.r)
      std::cout << *entry.r;
    else
      std::cout << "undefined";
    std::cout << " (" << entry.descriptor << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty and sensitivity analysis for stochastic simulation models:\n"
               "A-measure comparisons, replicate-count (consistency) analysis, one-at-a-time\n"
               "robustness sweeps, and Latin hypercube sampling with correlation analysis."};
  app.set_version_flag("--version", "absa 0.1.0");
  app.require_subcommand(1);

  std::string file_b, file_c;
  auto* cmd_ameasure = app.add_subcommand(
      "ameasure", "Compare two sample files (one value per line) with the A-measure");
  cmd_ameasure->add_option("file_b", file_b, "Samples of distribution B")->required();
  cmd_ameasure->add_option("file_c", file_c, "Samples of distribution C")->required();

  CampaignCli consistency_args, robustness_args, lhs_args, demo_args;
  auto* cmd_consistency = app.add_subcommand(
      "consistency", "Find the replicate count n* at which stochastic noise is a small effect");
  add_campaign_options(cmd_consistency, consistency_args, true, false);

  auto* cmd_robustness = app.add_subcommand(
      "robustness", "One-at-a-time parameter perturbation study against the calibrated model");
  add_campaign_options(cmd_robustness, robustness_args, true, true);

  auto* cmd_lhs = app.add_subcommand(
      "lhs", "Latin hypercube sampling with per-parameter correlation analysis");
  add_campaign_options(cmd_lhs, lhs_args, true, true);

  auto* cmd_demo = app.add_subcommand(
      "demo", "Full pipeline on the built-in toy model (consistency, robustness, lhs)");
  add_campaign_options(cmd_demo, demo_args, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_ameasure->parsed()) return run_ameasure(file_b, file_c);

    const CampaignCli& args = cmd_consistency->parsed()  ? consistency_args
                              : cmd_robustness->parsed() ? robustness_args
                              : cmd_lhs->parsed()        ? lhs_args
                                                         : demo_args;
    const absa::CampaignConfig config = args.config_path.empty()
                                            ? absa::demo_config()
                                            : absa::load_campaign_config(args.config_path);
    const absa::ReportOptions options = make_report_options(args, config);

    if (cmd_consistency->parsed()) {
      print_consistency_summary(absa::write_consistency_report(config, options));
    } else if (cmd_robustness->parsed()) {
      print_robustness_summary(absa::write_robustness_report(config, options));
    } else if (cmd_lhs->parsed()) {
      print_lhs_summary(absa::write_lhs_report(config, options));
    } else {
      const absa::DemoReport report = absa::write_demo_report(config, options);
      for (const auto& warning : report.warnings) std::cerr << "warning: " << warning << "\n";
      print_consistency_summary(report.consistency);
      print_robustness_summary(report.robustness);
      print_lhs_summary(report.lhs);
      std::cout << "summary: " << (options.out_dir / "demo_summary.json").string() << "\n";
    }
    return 0;
  } catch (const absa::SimulationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const absa::MissingPrerequisite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const absa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
