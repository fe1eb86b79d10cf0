#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rgenp/random.hpp"
#include "rgenp/stats.hpp"

namespace rgenp {

enum class OutputFormat { csv, markdown, json };

std::string to_string(OutputFormat format);
std::optional<OutputFormat> parse_output_format(const std::string& text);

/// One row of a verification suite: a theoretical bound against what was
/// observed, with enough context to diagnose a failure.
struct CheckRecord {
  std::string check;
  std::string params;
  double bound = 0.0;
  double observed = 0.0;
  double margin = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool verdict = true;
  bool gating = true;  // diagnostics never fail a suite
  std::string note;
};

struct CheckReport {
  std::string suite;
  Seed seed;
  std::vector<CheckRecord> records;

  bool passed() const noexcept;
  std::size_t failures() const noexcept;
};

/// Key/value echo of the configuration that produced a table.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

struct TableReport {
  std::string title;
  std::string quantity;  // what the statistics summarize
  std::uint64_t master_seed = 0;
  ConfigEcho config;
  std::vector<StatsRow> rows;
};

inline constexpr const char* kCsvHeader = "dimension,iterations,min,max,mean,std,failures";

void emit_report(const TableReport& report, OutputFormat format, std::ostream& out);
void emit_report(const CheckReport& report, OutputFormat format, std::ostream& out);

/// Writes to `path`, or to standard output when the path is empty or "-".
/// Throws Error with the stream's message when the file cannot be written.
void emit_report(const TableReport& report, OutputFormat format, const std::string& path);
void emit_report(const CheckReport& report, OutputFormat format, const std::string& path);

}  // namespace rgenp
