#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "funcineq/common.hpp"

namespace funcineq {

enum class CheckStatus { pass, fail, skip };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "skip";
  }
}

// One verification outcome.  margin is the slack of the inequality named in
// `name` (negative margin = violation); identity checks store margin = -|error|
// so the pass rule is uniform.  provenance carries quadrature/method notes.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  CheckStatus status = CheckStatus::fail;
  std::vector<std::pair<std::string, double>> params;
  std::string provenance;
};

inline InequalityReport make_report(std::string name, double lhs, double rhs, double margin,
                                    double tolerance,
                                    std::vector<std::pair<std::string, double>> params = {},
                                    std::string provenance = {}) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.tolerance = tolerance;
  r.pass = std::isfinite(margin) && margin >= -tolerance;
  r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  r.params = std::move(params);
  r.provenance = std::move(provenance);
  return r;
}

inline InequalityReport make_skip(std::string name,
                                  std::vector<std::pair<std::string, double>> params,
                                  std::string reason) {
  InequalityReport r;
  r.name = std::move(name);
  r.pass = true;
  r.status = CheckStatus::skip;
  r.params = std::move(params);
  r.provenance = "skipped: " + std::move(reason);
  return r;
}

struct ReportSummary {
  int pass = 0, fail = 0, skip = 0;
};

inline ReportSummary summarize(const std::vector<InequalityReport>& reports) {
  ReportSummary s;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::pass) ++s.pass;
    else if (r.status == CheckStatus::fail) ++s.fail;
    else ++s.skip;
  }
  return s;
}

inline std::string summary_line(const std::vector<InequalityReport>& reports) {
  ReportSummary s = summarize(reports);
  char buf[96];
  std::snprintf(buf, sizeof buf, "pass=%d fail=%d skip=%d", s.pass, s.fail, s.skip);
  return buf;
}

// ------------------------------------------------------------
// Serialization (hand-rolled for deterministic byte output)
// ------------------------------------------------------------

// 17 significant digits: round-trip exact for doubles.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string report_to_json(const InequalityReport& r) {
  std::ostringstream os;
  os << "{\"name\":\"" << json_escape(r.name) << "\","
     << "\"lhs\":" << format_double(r.lhs) << ","
     << "\"rhs\":" << format_double(r.rhs) << ","
     << "\"margin\":" << format_double(r.margin) << ","
     << "\"tolerance\":" << format_double(r.tolerance) << ","
     << "\"pass\":" << (r.pass ? "true" : "false") << ","
     << "\"status\":\"" << to_string(r.status) << "\","
     << "\"params\":{";
  for (size_t i = 0; i < r.params.size(); ++i) {
    if (i) os << ",";
    os << "\"" << json_escape(r.params[i].first) << "\":" << format_double(r.params[i].second);
  }
  os << "},\"provenance\":\"" << json_escape(r.provenance) << "\"}";
  return os.str();
}

inline std::string reports_to_json(const std::vector<InequalityReport>& reports) {
  ReportSummary s = summarize(reports);
  std::ostringstream os;
  os << "{\n  \"schema\": \"funcineq-report/1\",\n  \"reports\": [\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    os << "    " << report_to_json(reports[i]);
    if (i + 1 < reports.size()) os << ",";
    os << "\n";
  }
  os << "  ],\n  \"summary\": {\"pass\": " << s.pass << ", \"fail\": " << s.fail
     << ", \"skip\": " << s.skip << ", \"total\": " << reports.size() << "}\n}\n";
  return os.str();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream os;
  os << "name,lhs,rhs,margin,tolerance,pass,status,params,provenance\n";
  for (const auto& r : reports) {
    std::string params;
    for (size_t i = 0; i < r.params.size(); ++i) {
      if (i) params += ";";
      params += r.params[i].first + "=" + format_double(r.params[i].second);
    }
    os << csv_escape(r.name) << "," << format_double(r.lhs) << "," << format_double(r.rhs)
       << "," << format_double(r.margin) << "," << format_double(r.tolerance) << ","
       << (r.pass ? "true" : "false") << "," << to_string(r.status) << ","
       << csv_escape(params) << "," << csv_escape(r.provenance) << "\n";
  }
  return os.str();
}

// Provenance note for a computed functional.
inline std::string prov_note(const FunctionalValue& fv) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " est_error=%.3g", fv.est_error);
  return fv.method + buf;
}

inline std::string prov_note(const FunctionalValue& a, const FunctionalValue& b) {
  return prov_note(a) + "; " + prov_note(b);
}

}  // namespace funcineq
