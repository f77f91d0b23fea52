#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "ratlop/model.hpp"
#include "ratlop/scoring.hpp"

namespace testing {

inline ratlop::MaturityModelRef five_level_model(const std::string& id) {
  return {id, 5, {"isolated", "connected", "functional", "domain", "enterprise"}, {}};
}

/// Two organizations, one connection between their processes.
inline ratlop::BcnModel two_org_model() {
  using namespace ratlop;
  BcnModel m;
  m.bcn_id = "demo";
  m.organizations = {{"A", "Org A", five_level_model("LISI")},
                     {"B", "Org B", five_level_model("EIMM")}};
  m.processes = {{"PA", "A", ProcessKind::Elementary, {}},
                 {"PB", "B", ProcessKind::Elementary, {}},
                 {"MACRO", "A", ProcessKind::Composite, {"PA", "PB"}}};
  m.services = {{"SA", "PA", "service A"}};
  m.connections = {{"C1", "PA", "PB", std::string("SA")}};
  m.focus_process = "MACRO";
  return m;
}

/// Self-deleting scratch directory.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ratlop-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline ratlop::CompatibilityMatrix matrix_with_marks(int count) {
  ratlop::CompatibilityMatrix m;
  int placed = 0;
  for (auto level : ratlop::kConcernLevels)
    for (auto barrier : ratlop::kBarrierCategories)
      if (placed < count) {
        m.set_marked(level, barrier, true);
        ++placed;
      }
  return m;
}

}  // namespace testing
