#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ratlop {

// Layers of interoperability concern. Order is the row order of the
// compatibility matrix.
enum class ConcernLevel { Business, Process, Service, Data };

// Barrier sub-categories. Order is the column order of the compatibility matrix.
enum class BarrierCategory {
  ConceptualSyntactic,
  ConceptualSemantic,
  OrgAuthoritiesResponsibilities,
  OrgOrganisation,
  TechPlatform,
  TechCommunication,
};

enum class BarrierFamily { Conceptual, Organizational, Technical };

inline constexpr std::size_t kConcernLevelCount = 4;
inline constexpr std::size_t kBarrierCategoryCount = 6;

inline constexpr std::array<ConcernLevel, kConcernLevelCount> kConcernLevels{
    ConcernLevel::Business, ConcernLevel::Process, ConcernLevel::Service,
    ConcernLevel::Data};

inline constexpr std::array<BarrierCategory, kBarrierCategoryCount> kBarrierCategories{
    BarrierCategory::ConceptualSyntactic,
    BarrierCategory::ConceptualSemantic,
    BarrierCategory::OrgAuthoritiesResponsibilities,
    BarrierCategory::OrgOrganisation,
    BarrierCategory::TechPlatform,
    BarrierCategory::TechCommunication};

BarrierFamily family_of(BarrierCategory barrier);

std::string_view to_string(ConcernLevel level);
std::string_view to_string(BarrierCategory barrier);
std::string_view to_string(BarrierFamily family);
std::optional<ConcernLevel> parse_concern_level(std::string_view text);
std::optional<BarrierCategory> parse_barrier_category(std::string_view text);
std::optional<BarrierFamily> parse_barrier_family(std::string_view text);

struct MaturityModelRef {
  std::string model_id;  // "LISI", "EIMM", "OIMM", ...
  int level_count = 5;
  std::vector<std::string> level_names;
  // Either empty or one entry per level.
  std::vector<std::vector<std::string>> level_prerequisites;

  bool operator==(const MaturityModelRef&) const = default;
};

struct Organization {
  std::string org_id;
  std::string name;
  MaturityModelRef maturity_model;

  bool operator==(const Organization&) const = default;
};

enum class ProcessKind { Elementary, Composite };

struct BusinessProcess {
  std::string process_id;
  std::string owner_org;
  ProcessKind kind = ProcessKind::Elementary;
  std::vector<std::string> children;

  bool operator==(const BusinessProcess&) const = default;
};

struct ApplicationService {
  std::string service_id;
  std::string provider_process;
  std::string name;

  bool operator==(const ApplicationService&) const = default;
};

struct Connection {
  std::string connection_id;
  std::string from_process;
  std::string to_process;
  std::optional<std::string> via_service;

  bool operator==(const Connection&) const = default;
};

/// A business collaboration network: the organizations, their processes and
/// services, and the connections around the process under study.
struct BcnModel {
  std::string bcn_id;
  std::vector<Organization> organizations;
  std::vector<BusinessProcess> processes;
  std::vector<ApplicationService> services;
  std::vector<Connection> connections;
  std::string focus_process;

  const Organization* find_organization(std::string_view org_id) const;
  const BusinessProcess* find_process(std::string_view process_id) const;

  bool operator==(const BcnModel&) const = default;
};

struct Violation {
  std::string subject;  // offending identifier
  std::string rule;     // stable rule key, e.g. "dangling_reference"
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant of the model. Violations are returned as
/// data; an empty report means the model is well formed.
std::vector<Violation> validate_model(const BcnModel& model);

struct PeriodId {
  std::string label;
  std::int64_t ordinal = 0;

  bool operator==(const PeriodId&) const = default;
};

/// "YYYY-Qn" labels map to year*4 + (n-1). Any other label needs an explicit
/// ordinal. A quarter label with a conflicting explicit ordinal is rejected.
PeriodId canonical_period(std::string_view label,
                          std::optional<std::int64_t> ordinal = std::nullopt);

}  // namespace ratlop
