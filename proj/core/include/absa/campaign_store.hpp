#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "absa/run_record.hpp"
#include "absa/simulator.hpp"

namespace absa {

/// Serializes a double with 17 significant digits, enough for exact
/// round-tripping of any binary64 value.
std::string format_run_value(double v);

/// Writes records as a campaign CSV with header
/// `run_id,seed,<param names...>,<output names...>,status`, UTF-8 with LF
/// line endings, rows in run_id order. Failed runs leave their output cells
/// empty and carry `failed(<reason>)` in the status column.
void save_records(const std::filesystem::path& file, const std::vector<RunRecord>& records,
                  const std::vector<std::string>& param_names,
                  const std::vector<std::string>& output_names);

/// Reads a campaign CSV back. The caller supplies the schema (the same name
/// lists used to write the file); the header must match it exactly. Any
/// malformed content raises CorruptRecord naming the offending line.
/// wall_time is not part of the schema, so loaded records carry
/// wall_time_s = 0.
std::vector<RunRecord> load_records(const std::filesystem::path& file,
                                    const std::vector<std::string>& param_names,
                                    const std::vector<std::string>& output_names);

struct CampaignRunResult {
  std::vector<RunRecord> records;  // one per request, run_id order
  std::size_t executed = 0;        // how many were actually run this call
};

/// Executes a batch with resume support: run_ids already persisted as ok in
/// `csv_file` are reused (their stored seeds must match the request, else
/// CorruptRecord), everything else (including previously failed runs) is
/// executed, and the merged record set is rewritten atomically in run_id
/// order. Pass an empty path to skip persistence entirely.
CampaignRunResult run_campaign(const Simulator& sim, const std::vector<RunRequest>& requests,
                               unsigned parallelism, const std::filesystem::path& csv_file);

}  // namespace absa
