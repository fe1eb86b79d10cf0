#include "rgenp/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "rgenp/errors.hpp"

namespace rgenp {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return number(v);
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string seed_text(std::uint64_t seed) {
  std::ostringstream os;
  os << "0x" << std::hex << seed;
  return os.str();
}

template <class Report>
void emit_to_path(const Report& report, OutputFormat format, const std::string& path) {
  if (path.empty() || path == "-") {
    emit_report(report, format, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + ": " + std::strerror(errno));
  emit_report(report, format, out);
  out.flush();
  if (!out) throw Error("cannot write " + path + ": " + std::strerror(errno));
}

}  // namespace

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::markdown: return "markdown";
    case OutputFormat::json: return "json";
  }
  return "csv";
}

std::optional<OutputFormat> parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "markdown" || text == "md") return OutputFormat::markdown;
  if (text == "json") return OutputFormat::json;
  return std::nullopt;
}

bool CheckReport::passed() const noexcept { return failures() == 0; }

std::size_t CheckReport::failures() const noexcept {
  std::size_t n = 0;
  for (const CheckRecord& r : records)
    if (r.gating && !r.verdict) ++n;
  return n;
}

void emit_report(const TableReport& report, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::csv:
      out << kCsvHeader << '\n';
      for (const StatsRow& r : report.rows)
        out << r.dimension << ',' << r.iterations << ',' << csv_number(r.min) << ','
            << csv_number(r.max) << ',' << csv_number(r.mean) << ','
            << csv_number(r.std) << ',' << r.failures << '\n';
      break;
    case OutputFormat::markdown:
      out << "### " << report.title << "\n\n";
      out << "seed " << seed_text(report.master_seed) << ", " << report.quantity << "\n\n";
      out << "| dimension | iterations | min | max | mean | std | failures |\n";
      out << "|---|---|---|---|---|---|---|\n";
      for (const StatsRow& r : report.rows)
        out << "| " << r.dimension << " | " << r.iterations << " | " << number(r.min)
            << " | " << number(r.max) << " | " << number(r.mean) << " | "
            << number(r.std) << " | " << r.failures << " |\n";
      break;
    case OutputFormat::json: {
      nlohmann::json j;
      j["title"] = report.title;
      j["quantity"] = report.quantity;
      j["master_seed"] = report.master_seed;
      j["config"] = nlohmann::json::object();
      for (const auto& [k, v] : report.config) j["config"][k] = v;
      j["rows"] = nlohmann::json::array();
      for (const StatsRow& r : report.rows)
        j["rows"].push_back({{"dimension", r.dimension},
                             {"iterations", r.iterations},
                             {"min", json_number(r.min)},
                             {"max", json_number(r.max)},
                             {"mean", json_number(r.mean)},
                             {"std", json_number(r.std)},
                             {"failures", r.failures},
                             {"samples", r.samples}});
      out << j.dump(2) << '\n';
      break;
    }
  }
}

void emit_report(const CheckReport& report, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::csv:
      out << "check,params,bound,observed,margin,samples,violations,verdict,gating,note\n";
      for (const CheckRecord& r : report.records)
        out << csv_field(r.check) << ',' << csv_field(r.params) << ','
            << csv_number(r.bound) << ',' << csv_number(r.observed) << ','
            << csv_number(r.margin) << ',' << r.samples << ',' << r.violations << ','
            << (r.verdict ? "pass" : "fail") << ',' << (r.gating ? "yes" : "no") << ','
            << csv_field(r.note) << '\n';
      break;
    case OutputFormat::markdown:
      out << "### " << report.suite << "\n\nseed " << seed_text(report.seed.master)
          << ", " << (report.passed() ? "all checks pass" : "FAILED") << "\n\n";
      out << "| check | params | bound | observed | margin | samples | violations | verdict | note |\n";
      out << "|---|---|---|---|---|---|---|---|---|\n";
      for (const CheckRecord& r : report.records)
        out << "| " << r.check << " | " << r.params << " | " << number(r.bound) << " | "
            << number(r.observed) << " | " << number(r.margin) << " | " << r.samples
            << " | " << r.violations << " | "
            << (r.verdict ? "pass" : "fail") << (r.gating ? "" : " (diagnostic)")
            << " | " << r.note << " |\n";
      break;
    case OutputFormat::json: {
      nlohmann::json j;
      j["suite"] = report.suite;
      j["master_seed"] = report.seed.master;
      j["passed"] = report.passed();
      j["records"] = nlohmann::json::array();
      for (const CheckRecord& r : report.records)
        j["records"].push_back({{"check", r.check},
                                {"params", r.params},
                                {"bound", json_number(r.bound)},
                                {"observed", json_number(r.observed)},
                                {"margin", json_number(r.margin)},
                                {"samples", r.samples},
                                {"violations", r.violations},
                                {"verdict", r.verdict},
                                {"gating", r.gating},
                                {"note", r.note}});
      out << j.dump(2) << '\n';
      break;
    }
  }
}

void emit_report(const TableReport& report, OutputFormat format, const std::string& path) {
  emit_to_path(report, format, path);
}

void emit_report(const CheckReport& report, OutputFormat format, const std::string& path) {
  emit_to_path(report, format, path);
}

}  // namespace rgenp
