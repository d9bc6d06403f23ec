#include "absa/campaign_store.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "absa/errors.hpp"

namespace absa {

std::string format_run_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (in_quotes)
    throw CorruptRecord("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

std::uint64_t parse_u64(const std::string& text, std::size_t line_no, const char* what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw CorruptRecord("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size())
    throw CorruptRecord("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  return v;
}

double parse_finite(const std::string& text, std::size_t line_no, const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || errno != 0 || end != text.c_str() + text.size() || !std::isfinite(v))
    throw CorruptRecord("line " + std::to_string(line_no) + ": bad value '" + text +
                        "' in column " + column);
  return v;
}

std::string expected_header(const std::vector<std::string>& param_names,
                            const std::vector<std::string>& output_names) {
  std::string header = "run_id,seed";
  for (const auto& p : param_names) header += "," + quote_field(p);
  for (const auto& o : output_names) header += "," + quote_field(o);
  header += ",status";
  return header;
}

}  // namespace

void save_records(const std::filesystem::path& file, const std::vector<RunRecord>& records,
                  const std::vector<std::string>& param_names,
                  const std::vector<std::string>& output_names) {
  std::vector<const RunRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](const RunRecord* a, const RunRecord* b) {
    return a->request.run_id < b->request.run_id;
  });

  std::ostringstream out;
  out << expected_header(param_names, output_names) << '\n';
  for (const RunRecord* r : ordered) {
    out << r->request.run_id << ',' << r->request.seed;
    for (const auto& p : param_names) {
      auto it = r->request.parameters.find(p);
      if (it == r->request.parameters.end())
        throw IoFailure("record " + std::to_string(r->request.run_id) +
                        " is missing parameter '" + p + "'");
      out << ',' << format_run_value(it->second);
    }
    for (const auto& o : output_names) {
      auto it = r->outputs.find(o);
      out << ',';
      if (it != r->outputs.end()) out << format_run_value(it->second);
    }
    out << ',' << (r->ok ? "ok" : quote_field("failed(" + r->failure_reason + ")")) << '\n';
  }

  // Write to a sibling temp file first so a crash never leaves a torn CSV.
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure("cannot open '" + tmp.string() + "' for writing");
    f << out.str();
    if (!f.flush()) throw IoFailure("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoFailure("cannot replace '" + file.string() + "': " + ec.message());
}

std::vector<RunRecord> load_records(const std::filesystem::path& file,
                                    const std::vector<std::string>& param_names,
                                    const std::vector<std::string>& output_names) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw IoFailure("cannot open '" + file.string() + "' for reading");

  std::string line;
  if (!std::getline(f, line)) throw CorruptRecord("line 1: missing header");
  if (!line.empty() && line.back() == '\r')
    throw CorruptRecord("line 1: CRLF line ending, campaign CSV must use LF");
  if (line != expected_header(param_names, output_names))
    throw CorruptRecord("line 1: header does not match the campaign schema");

  const std::size_t expected_fields = 3 + param_names.size() + output_names.size();
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      throw CorruptRecord("line " + std::to_string(line_no) +
                          ": CRLF line ending, campaign CSV must use LF");
    if (line.empty())
      throw CorruptRecord("line " + std::to_string(line_no) + ": blank line inside data");

    const std::vector<std::string> fields = parse_csv_line(line, line_no);
    if (fields.size() != expected_fields)
      throw CorruptRecord("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(expected_fields) + " fields, got " +
                          std::to_string(fields.size()));

    RunRecord record;
    record.request.run_id = parse_u64(fields[0], line_no, "run_id");
    record.request.seed = parse_u64(fields[1], line_no, "seed");

    const std::string& status = fields.back();
    if (status == "ok") {
      record.ok = true;
    } else if (status.rfind("failed(", 0) == 0 && status.size() >= 8 && status.back() == ')') {
      record.ok = false;
      record.failure_reason = status.substr(7, status.size() - 8);
    } else {
      throw CorruptRecord("line " + std::to_string(line_no) + ": bad status '" + status + "'");
    }

    std::size_t col = 2;
    for (const auto& p : param_names)
      record.request.parameters[p] = parse_finite(fields[col++], line_no, p);
    for (const auto& o : output_names) {
      const std::string& cell = fields[col++];
      if (record.ok) {
        record.outputs[o] = parse_finite(cell, line_no, o);
      } else if (!cell.empty()) {
        record.outputs[o] = parse_finite(cell, line_no, o);
      }
    }
    records.push_back(std::move(record));
  }
  if (f.bad()) throw IoFailure("read error on '" + file.string() + "'");
  return records;
}

CampaignRunResult run_campaign(const Simulator& sim, const std::vector<RunRequest>& requests,
                               unsigned parallelism, const std::filesystem::path& csv_file) {
  const bool persist = !csv_file.empty();

  std::map<std::uint64_t, RunRecord> reusable;
  if (persist && std::filesystem::exists(csv_file)) {
    for (auto& record : load_records(csv_file, sim.spec().parameters, sim.spec().outputs)) {
      if (record.ok) reusable.emplace(record.request.run_id, std::move(record));
    }
  }

  std::vector<RunRequest> pending;
  for (const auto& request : requests) {
    auto it = reusable.find(request.run_id);
    if (it == reusable.end()) {
      pending.push_back(request);
    } else if (it->second.request.seed != request.seed) {
      throw CorruptRecord("persisted run " + std::to_string(request.run_id) + " has seed " +
                          std::to_string(it->second.request.seed) +
                          " but the campaign expects " + std::to_string(request.seed));
    }
  }

  std::vector<RunRecord> fresh = execute_batch(sim, pending, parallelism);

  CampaignRunResult result;
  result.executed = fresh.size();
  result.records.reserve(requests.size());
  std::size_t fresh_i = 0;
  for (const auto& request : requests) {
    auto it = reusable.find(request.run_id);
    if (it != reusable.end()) {
      result.records.push_back(it->second);
    } else {
      result.records.push_back(std::move(fresh[fresh_i++]));
    }
  }

  if (persist) save_records(csv_file, result.records, sim.spec().parameters, sim.spec().outputs);
  return result;
}

}  // namespace absa
