#include "ratlop/timeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <set>

#include "ratlop/errors.hpp"
#include "ratlop/serialize.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace ratlop {

PeriodAssessment make_assessment(PeriodId period, std::vector<MaturityAssessment> maturity,
                                 CompatibilityMatrix matrix, PerformanceSnapshot snapshot,
                                 WeightConfig weights) {
  PeriodAssessment a;
  a.period = std::move(period);
  a.maturity = std::move(maturity);
  a.matrix = std::move(matrix);
  a.snapshot = snapshot;
  a.weights = weights;
  a.scores = assess_inputs(a.maturity, a.matrix, a.snapshot, a.weights);
  return a;
}

void verify_scores(const PeriodAssessment& a) {
  const auto expected = assess_inputs(a.maturity, a.matrix, a.snapshot, a.weights);
  const auto& got = a.scores;
  auto off = [](double x, double y) { return !(std::fabs(x - y) <= kScoreEpsilon); };
  nlohmann::json mismatches = nlohmann::json::object();
  if (off(got.pi, expected.pi)) mismatches["pi"] = {got.pi, expected.pi};
  if (off(got.dc, expected.dc)) mismatches["dc"] = {got.dc, expected.dc};
  if (off(got.po, expected.po)) mismatches["po"] = {got.po, expected.po};
  if (off(got.ratlop, expected.ratlop)) mismatches["ratlop"] = {got.ratlop, expected.ratlop};
  if (!(got.weights == a.weights)) mismatches["weights"] = "differ from assessment weights";
  if (got.per_org_pi.size() != expected.per_org_pi.size()) {
    mismatches["per_org_pi"] = "organization set differs";
  } else {
    for (const auto& [org, pi] : expected.per_org_pi) {
      auto it = got.per_org_pi.find(org);
      if (it == got.per_org_pi.end() || off(it->second, pi)) mismatches["per_org_pi." + org] = pi;
    }
  }
  if (!mismatches.empty())
    fail(ErrorCode::Integrity,
         "stored scores for period '" + a.period.label + "' do not match recomputation",
         mismatches);
}

Trend make_trend(const std::vector<PeriodAssessment>& ordered) {
  Trend t;
  for (const auto& a : ordered) {
    t.periods.push_back(a.period);
    t.ratlop.push_back(a.scores.ratlop);
    t.pi.push_back(a.scores.pi);
    t.dc.push_back(a.scores.dc);
    t.po.push_back(a.scores.po);
  }
  for (std::size_t i = 1; i < t.ratlop.size(); ++i) t.deltas.push_back(t.ratlop[i] - t.ratlop[i - 1]);
  return t;
}

std::string trend_csv(const Trend& trend) {
  std::string out = "period,pi,dc,po,ratlop\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", round_export(v));
    return std::string(buf);
  };
  for (std::size_t i = 0; i < trend.periods.size(); ++i) {
    out += trend.periods[i].label + "," + num(trend.pi[i]) + "," + num(trend.dc[i]) + "," +
           num(trend.po[i]) + "," + num(trend.ratlop[i]) + "\n";
  }
  return out;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::NotFound, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Input, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::Input, "cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

// Advisory inter-process lock on <bcn>/.lock.
class FileLock {
public:
  explicit FileLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) fail(ErrorCode::Conflict, "cannot open lock file '" + path.string() + "'");
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fail(ErrorCode::Conflict, "cannot lock '" + path.string() + "'");
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

private:
  int fd_ = -1;
};

bool valid_bcn_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
      return false;
  return true;
}

std::optional<TimelineStore::RevisionKey> parse_revision_name(const std::string& name) {
  const auto dot = name.find('.');
  if (dot == std::string::npos) return std::nullopt;
  auto ordinal = text::to_int(std::string_view(name).substr(0, dot));
  auto revision = text::to_int(std::string_view(name).substr(dot + 1));
  if (!ordinal || !revision || *revision < 1) return std::nullopt;
  return TimelineStore::RevisionKey{*ordinal, static_cast<int>(*revision)};
}

std::string revision_name(std::int64_t ordinal, int revision) {
  return std::to_string(ordinal) + "." + std::to_string(revision);
}

}  // namespace

TimelineStore::TimelineStore(fs::path root, Clock clock)
    : root_(std::move(root)), clock_(clock ? std::move(clock) : Clock(&utc_timestamp_now)) {
  fs::create_directories(root_);
}

fs::path TimelineStore::bcn_dir(const std::string& bcn_id) const {
  if (!valid_bcn_id(bcn_id))
    fail(ErrorCode::Validation, "BCN identifier '" + bcn_id +
                                    "' may only contain letters, digits, '-', '_' and '.'");
  return root_ / bcn_id;
}

bool TimelineStore::has_bcn(const std::string& bcn_id) const {
  std::shared_lock lock(mutex_);
  return fs::exists(bcn_dir(bcn_id) / "model");
}

void TimelineStore::require_bcn(const std::string& bcn_id) const {
  if (!fs::exists(bcn_dir(bcn_id) / "model"))
    fail(ErrorCode::NotFound, "unknown BCN '" + bcn_id + "'", {{"bcn_id", bcn_id}});
}

bool TimelineStore::put_model(const BcnModel& model) {
  auto violations = validate_model(model);
  if (!violations.empty())
    fail(ErrorCode::Validation, "model '" + model.bcn_id + "' is invalid",
         {{"violations", violations}});
  std::unique_lock lock(mutex_);
  const auto dir = bcn_dir(model.bcn_id);
  fs::create_directories(dir / "assessments");
  FileLock file_lock(dir / ".lock");
  const bool created = !fs::exists(dir / "model");
  write_atomically(dir / "model", dump_document(bcn_to_json(model)));
  return created;
}

std::string TimelineStore::get_model_document(const std::string& bcn_id) const {
  std::shared_lock lock(mutex_);
  require_bcn(bcn_id);
  return read_file(bcn_dir(bcn_id) / "model");
}

BcnModel TimelineStore::get_model(const std::string& bcn_id) const {
  return parse_bcn_document(get_model_document(bcn_id));
}

std::vector<TimelineStore::RevisionKey> TimelineStore::revisions(const std::string& bcn_id) const {
  std::vector<RevisionKey> keys;
  const auto dir = bcn_dir(bcn_id) / "assessments";
  if (!fs::exists(dir)) return keys;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto key = parse_revision_name(entry.path().filename().string())) keys.push_back(*key);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

int TimelineStore::record_assessment(const std::string& bcn_id, PeriodAssessment assessment) {
  verify_scores(assessment);
  std::unique_lock lock(mutex_);
  require_bcn(bcn_id);
  const auto dir = bcn_dir(bcn_id);
  FileLock file_lock(dir / ".lock");

  const auto model = parse_bcn_document(read_file(dir / "model"));
  assess(model, assessment.maturity, assessment.matrix, assessment.snapshot, assessment.weights);

  int revision = 0;
  for (const auto& key : revisions(bcn_id)) {
    if (key.ordinal == assessment.period.ordinal) revision = std::max(revision, key.revision);
    // The label of an ordinal is fixed by its first recording.
    if (key.ordinal == assessment.period.ordinal && key.revision == 1) {
      auto first = assessment_from_json(parse_document(
          read_file(dir / "assessments" / revision_name(key.ordinal, 1)), "assessment"));
      if (first.period.label != assessment.period.label)
        fail(ErrorCode::Conflict, "ordinal " + std::to_string(key.ordinal) +
                                      " is already recorded as period '" + first.period.label +
                                      "'");
    }
  }
  assessment.revision = revision + 1;
  if (assessment.recorded_at.empty()) assessment.recorded_at = clock_();
  write_atomically(dir / "assessments" / revision_name(assessment.period.ordinal, assessment.revision),
                   dump_document(assessment_to_json(bcn_id, assessment)));
  return assessment.revision;
}

std::string TimelineStore::get_assessment_document(const std::string& bcn_id,
                                                   std::int64_t ordinal, int revision) const {
  std::shared_lock lock(mutex_);
  require_bcn(bcn_id);
  const auto path = bcn_dir(bcn_id) / "assessments" / revision_name(ordinal, revision);
  if (!fs::exists(path))
    fail(ErrorCode::NotFound, "no assessment " + revision_name(ordinal, revision) + " for BCN '" +
                                  bcn_id + "'");
  return read_file(path);
}

PeriodAssessment TimelineStore::get_assessment(const std::string& bcn_id, std::int64_t ordinal,
                                               std::optional<int> revision) const {
  if (!revision) {
    std::shared_lock lock(mutex_);
    require_bcn(bcn_id);
    for (const auto& key : revisions(bcn_id))
      if (key.ordinal == ordinal) revision = key.revision;
    if (!revision)
      fail(ErrorCode::NotFound, "no assessment for period ordinal " + std::to_string(ordinal));
  }
  auto a = assessment_from_json(
      parse_document(get_assessment_document(bcn_id, ordinal, *revision), "assessment"));
  verify_scores(a);
  return a;
}

std::vector<PeriodAssessment> TimelineStore::latest_per_period(const std::string& bcn_id) const {
  std::shared_lock lock(mutex_);
  require_bcn(bcn_id);
  std::map<std::int64_t, int> latest;
  for (const auto& key : revisions(bcn_id)) latest[key.ordinal] = key.revision;
  std::vector<PeriodAssessment> out;
  const auto dir = bcn_dir(bcn_id) / "assessments";
  for (const auto& [ordinal, revision] : latest) {
    auto a = assessment_from_json(
        parse_document(read_file(dir / revision_name(ordinal, revision)), "assessment"));
    verify_scores(a);
    out.push_back(std::move(a));
  }
  return out;
}

Trend TimelineStore::get_trend(const std::string& bcn_id, const std::optional<PeriodId>& from,
                               const std::optional<PeriodId>& to) const {
  if (from && to && from->ordinal > to->ordinal)
    fail(ErrorCode::Validation, "trend range starts after it ends");
  std::vector<PeriodAssessment> in_range;
  for (auto& a : latest_per_period(bcn_id)) {
    if (from && a.period.ordinal < from->ordinal) continue;
    if (to && a.period.ordinal > to->ordinal) continue;
    in_range.push_back(std::move(a));
  }
  if (in_range.empty())
    fail(ErrorCode::Validation, "no assessment recorded in the requested range");
  return make_trend(in_range);
}

PeriodAssessment TimelineStore::latest_assessment(const std::string& bcn_id) const {
  auto all = latest_per_period(bcn_id);
  if (all.empty())
    fail(ErrorCode::NotFound, "no assessment recorded for BCN '" + bcn_id + "'",
         {{"bcn_id", bcn_id}});
  return std::move(all.back());
}

std::optional<PeriodId> TimelineStore::find_period(const std::string& bcn_id,
                                                   const std::string& label) const {
  for (const auto& a : latest_per_period(bcn_id))
    if (a.period.label == label) return a.period;
  return std::nullopt;
}

}  // namespace ratlop
