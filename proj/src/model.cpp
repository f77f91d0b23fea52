#include "ratlop/model.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <set>

#include "ratlop/errors.hpp"

namespace ratlop {

BarrierFamily family_of(BarrierCategory barrier) {
  switch (barrier) {
    case BarrierCategory::ConceptualSyntactic:
    case BarrierCategory::ConceptualSemantic:
      return BarrierFamily::Conceptual;
    case BarrierCategory::OrgAuthoritiesResponsibilities:
    case BarrierCategory::OrgOrganisation:
      return BarrierFamily::Organizational;
    case BarrierCategory::TechPlatform:
    case BarrierCategory::TechCommunication:
      return BarrierFamily::Technical;
  }
  return BarrierFamily::Technical;
}

std::string_view to_string(ConcernLevel level) {
  switch (level) {
    case ConcernLevel::Business: return "business";
    case ConcernLevel::Process: return "process";
    case ConcernLevel::Service: return "service";
    case ConcernLevel::Data: return "data";
  }
  return "";
}

std::string_view to_string(BarrierCategory barrier) {
  switch (barrier) {
    case BarrierCategory::ConceptualSyntactic: return "conceptual_syntactic";
    case BarrierCategory::ConceptualSemantic: return "conceptual_semantic";
    case BarrierCategory::OrgAuthoritiesResponsibilities:
      return "org_authorities_responsibilities";
    case BarrierCategory::OrgOrganisation: return "org_organisation";
    case BarrierCategory::TechPlatform: return "tech_platform";
    case BarrierCategory::TechCommunication: return "tech_communication";
  }
  return "";
}

std::string_view to_string(BarrierFamily family) {
  switch (family) {
    case BarrierFamily::Conceptual: return "conceptual";
    case BarrierFamily::Organizational: return "organizational";
    case BarrierFamily::Technical: return "technical";
  }
  return "";
}

std::optional<ConcernLevel> parse_concern_level(std::string_view text) {
  for (auto level : kConcernLevels)
    if (to_string(level) == text) return level;
  return std::nullopt;
}

std::optional<BarrierCategory> parse_barrier_category(std::string_view text) {
  for (auto barrier : kBarrierCategories)
    if (to_string(barrier) == text) return barrier;
  return std::nullopt;
}

std::optional<BarrierFamily> parse_barrier_family(std::string_view text) {
  for (auto family : {BarrierFamily::Conceptual, BarrierFamily::Organizational,
                      BarrierFamily::Technical})
    if (to_string(family) == text) return family;
  return std::nullopt;
}

const Organization* BcnModel::find_organization(std::string_view org_id) const {
  for (const auto& org : organizations)
    if (org.org_id == org_id) return &org;
  return nullptr;
}

const BusinessProcess* BcnModel::find_process(std::string_view process_id) const {
  for (const auto& process : processes)
    if (process.process_id == process_id) return &process;
  return nullptr;
}

namespace {

class Report {
public:
  void add(std::string subject, std::string rule, std::string message) {
    violations_.push_back({std::move(subject), std::move(rule), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(violations_); }

private:
  std::vector<Violation> violations_;
};

template <typename Items, typename Key>
std::set<std::string> collect_ids(const Items& items, Key key, std::string_view what,
                                  Report& report) {
  std::set<std::string> ids;
  for (const auto& item : items) {
    const std::string& id = key(item);
    if (id.empty()) {
      report.add(id, "empty_id", std::string(what) + " with empty identifier");
    } else if (!ids.insert(id).second) {
      report.add(id, "duplicate_id", std::string(what) + " '" + id + "' is declared twice");
    }
  }
  return ids;
}

void check_maturity_model(const Organization& org, Report& report) {
  const auto& mm = org.maturity_model;
  if (mm.level_count != 5) {
    report.add(org.org_id, "maturity_level_count",
               "maturity model '" + mm.model_id + "' of organization '" + org.org_id +
                   "' must have 5 levels, has " + std::to_string(mm.level_count));
  }
  if (mm.level_names.size() != static_cast<std::size_t>(mm.level_count)) {
    report.add(org.org_id, "maturity_level_names",
               "maturity model of organization '" + org.org_id + "' lists " +
                   std::to_string(mm.level_names.size()) + " level names for " +
                   std::to_string(mm.level_count) + " levels");
  }
  if (!mm.level_prerequisites.empty() &&
      mm.level_prerequisites.size() != static_cast<std::size_t>(mm.level_count)) {
    report.add(org.org_id, "maturity_level_prerequisites",
               "maturity model of organization '" + org.org_id +
                   "' must list prerequisites for every level or none");
  }
}

void check_composition_cycles(const BcnModel& model, const std::set<std::string>& process_ids,
                              Report& report) {
  std::map<std::string, const BusinessProcess*> by_id;
  for (const auto& p : model.processes) by_id.emplace(p.process_id, &p);

  enum class Mark { Unvisited, Active, Done };
  std::map<std::string, Mark> marks;
  std::set<std::string> reported;

  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    marks[id] = Mark::Active;
    for (const auto& child : by_id.at(id)->children) {
      if (!process_ids.count(child)) continue;  // reported as dangling
      auto mark = marks[child];
      if (mark == Mark::Active) {
        if (reported.insert(child).second)
          report.add(child, "composition_cycle",
                     "process '" + child + "' is part of a composition cycle");
      } else if (mark == Mark::Unvisited) {
        visit(child);
      }
    }
    marks[id] = Mark::Done;
  };

  for (const auto& [id, process] : by_id)
    if (marks[id] == Mark::Unvisited) visit(id);
}

}  // namespace

std::vector<Violation> validate_model(const BcnModel& model) {
  Report report;

  if (model.bcn_id.empty()) report.add("", "empty_id", "BCN identifier is empty");
  if (model.organizations.empty())
    report.add(model.bcn_id, "no_organizations", "the network declares no organization");

  auto org_ids = collect_ids(model.organizations,
                             [](const Organization& o) -> const std::string& { return o.org_id; },
                             "organization", report);
  auto process_ids = collect_ids(
      model.processes, [](const BusinessProcess& p) -> const std::string& { return p.process_id; },
      "process", report);
  auto service_ids = collect_ids(
      model.services,
      [](const ApplicationService& s) -> const std::string& { return s.service_id; }, "service",
      report);
  collect_ids(model.connections,
              [](const Connection& c) -> const std::string& { return c.connection_id; },
              "connection", report);

  for (const auto& org : model.organizations) check_maturity_model(org, report);

  auto dangling = [&](const std::string& ref, std::string_view owner, std::string_view what) {
    report.add(ref, "dangling_reference",
               std::string(owner) + " references unknown " + std::string(what) + " '" + ref + "'");
  };

  for (const auto& p : model.processes) {
    const std::string owner = "process '" + p.process_id + "'";
    if (!org_ids.count(p.owner_org)) dangling(p.owner_org, owner, "organization");
    if (p.kind == ProcessKind::Elementary && !p.children.empty())
      report.add(p.process_id, "elementary_with_children",
                 "elementary process '" + p.process_id + "' must not have children");
    if (p.kind == ProcessKind::Composite && p.children.empty())
      report.add(p.process_id, "composite_without_children",
                 "composite process '" + p.process_id + "' must have children");
    for (const auto& child : p.children) {
      if (!process_ids.count(child)) dangling(child, owner, "process");
    }
  }
  check_composition_cycles(model, process_ids, report);

  for (const auto& s : model.services)
    if (!process_ids.count(s.provider_process))
      dangling(s.provider_process, "service '" + s.service_id + "'", "process");

  for (const auto& c : model.connections) {
    const std::string owner = "connection '" + c.connection_id + "'";
    if (!process_ids.count(c.from_process)) dangling(c.from_process, owner, "process");
    if (!process_ids.count(c.to_process)) dangling(c.to_process, owner, "process");
    if (c.from_process == c.to_process)
      report.add(c.connection_id, "self_connection",
                 owner + " connects process '" + c.from_process + "' to itself");
    if (c.via_service && !service_ids.count(*c.via_service))
      dangling(*c.via_service, owner, "service");
  }

  if (!process_ids.count(model.focus_process))
    dangling(model.focus_process, "focus_process", "process");

  return report.take();
}

PeriodId canonical_period(std::string_view label, std::optional<std::int64_t> ordinal) {
  if (label.empty()) fail(ErrorCode::Validation, "period label is empty");

  // YYYY-Qn
  std::optional<std::int64_t> quarter_ordinal;
  if (label.size() == 7 && label[4] == '-' && label[5] == 'Q') {
    int year = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + 4, year);
    const char q = label[6];
    if (ec == std::errc{} && ptr == label.data() + 4 && q >= '1' && q <= '4')
      quarter_ordinal = static_cast<std::int64_t>(year) * 4 + (q - '1');
  }

  if (quarter_ordinal) {
    if (ordinal && *ordinal != *quarter_ordinal)
      fail(ErrorCode::Validation, "period '" + std::string(label) + "' has ordinal " +
                                      std::to_string(*quarter_ordinal) + ", not " +
                                      std::to_string(*ordinal));
    return {std::string(label), *quarter_ordinal};
  }
  if (!ordinal)
    fail(ErrorCode::Validation, "period '" + std::string(label) +
                                    "' is not of the form YYYY-Qn and has no explicit ordinal");
  if (*ordinal < 0)
    fail(ErrorCode::Validation, "period ordinal must be non-negative");
  return {std::string(label), *ordinal};
}

}  // namespace ratlop
