#include "ratlop/report.hpp"

#include <cstdio>
#include <sstream>

namespace ratlop {

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", round_export(value));
  return buf;
}

namespace {

std::string format_signed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.6f", round_export(value));
  return buf;
}

std::string format_cost(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (const auto& v : violations) out << "violation [" << v.rule << "] " << v.subject << ": " << v.message << "\n";
  return out.str();
}

std::string format_breakdown(const PeriodId& period, int revision, const ScoreBreakdown& s) {
  std::ostringstream out;
  out << "period   " << period.label << " (ordinal " << period.ordinal << ")";
  if (revision > 0) out << ", revision " << revision;
  out << "\n";
  for (const auto& [org, pi] : s.per_org_pi) out << "  PI[" << org << "] " << format_score(pi) << "\n";
  out << "pi       " << format_score(s.pi) << "\n";
  out << "dc       " << format_score(s.dc) << "\n";
  out << "po       " << format_score(s.po) << "\n";
  out << "weights  " << s.weights.w_pi << "," << s.weights.w_dc << "," << s.weights.w_po << "\n";
  out << "ratlop   " << format_score(s.ratlop) << "\n";
  return out.str();
}

std::string format_trend(const Trend& t) {
  std::ostringstream out;
  std::size_t width = 8;
  for (const auto& p : t.periods) width = std::max(width, p.label.size() + 2);
  out << pad("period", width) << "pi        dc        po        ratlop    delta\n";
  for (std::size_t i = 0; i < t.periods.size(); ++i) {
    out << pad(t.periods[i].label, width) << format_score(t.pi[i]) << "  " << format_score(t.dc[i])
        << "  " << format_score(t.po[i]) << "  " << format_score(t.ratlop[i]) << "  "
        << (i == 0 ? std::string("-") : format_signed(t.deltas[i - 1])) << "\n";
  }
  return out.str();
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "as-is ratlop   " << format_score(s.asis.ratlop) << "\n";
  out << "target         " << format_score(s.target) << "\n";
  if (s.actions.empty()) {
    out << "no action required\n";
    return out.str();
  }
  out << "actions:\n";
  for (const auto& a : s.actions)
    out << "  - " << describe(a.action) << "  (cost " << format_cost(a.cost) << ")\n";
  out << "total cost     " << format_cost(s.total_cost) << "\n";
  out << "predicted pi   " << format_score(s.predicted.pi) << "\n";
  out << "predicted dc   " << format_score(s.predicted.dc) << "\n";
  out << "predicted po   " << format_score(s.predicted.po) << "\n";
  out << "predicted      " << format_score(s.predicted.ratlop) << "\n";
  out << "optimal        " << (s.optimal ? "yes" : "no (time budget exhausted)") << "\n";
  return out.str();
}

}  // namespace ratlop
