#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "brandt/rational.hpp"

namespace brandt {

enum class Status { pass, fail, not_applicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not-applicable";
  }
  return "?";
}

// Reals go out as decimal strings at 17 significant digits.
inline std::string format_real(const Real& x) {
  if (x == 0) return "0";
  return x.str(16, std::ios_base::scientific);
}

struct ReportRow {
  std::string identity;
  std::string params;
  std::string lhs;
  std::string rhs;
  Real residual = 0;
  Status status = Status::pass;
  std::string note;
  bool discrepancy = false;
};

inline ReportRow exact_row(std::string identity, std::string params, const Rational& lhs, const Rational& rhs) {
  ReportRow r{std::move(identity), std::move(params), to_string(lhs), to_string(rhs),
              boost::multiprecision::abs(to_real(lhs - rhs)), lhs == rhs ? Status::pass : Status::fail, "", false};
  return r;
}

inline ReportRow real_row(std::string identity, std::string params, const Real& lhs, const Real& rhs, const Real& tol) {
  const Real res = boost::multiprecision::abs(lhs - rhs);
  return ReportRow{std::move(identity), std::move(params), format_real(lhs), format_real(rhs), res,
                   res <= tol ? Status::pass : Status::fail, "", false};
}

inline ReportRow not_applicable_row(std::string identity, std::string params, std::string note) {
  return ReportRow{std::move(identity), std::move(params), "", "", 0, Status::not_applicable, std::move(note), false};
}

struct VerificationReport {
  std::int64_t level = 0;
  std::vector<ReportRow> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  bool all_pass() const {
    for (const auto& r : rows)
      if (r.status == Status::fail) return false;
    return true;
  }

  std::size_t count(Status s) const {
    std::size_t c = 0;
    for (const auto& r : rows) c += r.status == s;
    return c;
  }

  void append(const VerificationReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

inline nlohmann::ordered_json to_json(const ReportRow& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["params"] = r.params;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = format_real(r.residual);
  j["status"] = to_string(r.status);
  if (!r.note.empty()) j["note"] = r.note;
  if (r.discrepancy) j["discrepancy"] = true;
  return j;
}

inline nlohmann::ordered_json to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["level"] = rep.level;
  j["identities"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) j["identities"].push_back(to_json(r));
  for (const auto& [k, v] : rep.summary.items()) j[k] = v;
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "identity,params,lhs,rhs,residual,status,note\n";
  for (const auto& r : rep.rows)
    os << csv_escape(r.identity) << ',' << csv_escape(r.params) << ',' << csv_escape(r.lhs) << ','
       << csv_escape(r.rhs) << ',' << format_real(r.residual) << ',' << to_string(r.status) << ','
       << csv_escape(r.note) << '\n';
  return os.str();
}

inline std::string to_table(const VerificationReport& rep) {
  const std::vector<std::string> head{"identity", "params", "lhs", "rhs", "status", "note"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rep.rows) cells.push_back({r.identity, r.params, r.lhs, r.rhs, to_string(r.status), r.note});
  std::vector<std::size_t> width;
  for (const auto& h : head) width.push_back(h.size());
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c + 1 < row.size(); ++c) os << std::left << std::setw(static_cast<int>(width[c] + 2)) << row[c];
    os << row.back() << '\n';
  };
  line(head);
  for (const auto& row : cells) line(row);
  os << "pass " << rep.count(Status::pass) << ", fail " << rep.count(Status::fail) << ", not-applicable "
     << rep.count(Status::not_applicable) << '\n';
  return os.str();
}

}  // namespace brandt
