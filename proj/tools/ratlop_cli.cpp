// ratlop: command-line front end for interoperability assessment, tracking and
// planning over a file-based store.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ratlop/api.hpp"
#include "ratlop/errors.hpp"
#include "ratlop/inputs.hpp"
#include "ratlop/planner.hpp"
#include "ratlop/report.hpp"
#include "ratlop/serialize.hpp"
#include "ratlop/timeline.hpp"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitInput = 2;

int exit_code(const ratlop::Error& e) {
  return e.code() == ratlop::ErrorCode::Input ? kExitInput : kExitDomain;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ratlop::Error(ratlop::ErrorCode::Input, "cannot write '" + path + "'");
  out << content;
}

ratlop::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ratlop;

  CLI::App app{"Interoperability assessment, tracking and planning"};
  app.require_subcommand(1);
  std::string store_dir = env_or("RATLOP_STORE", "ratlop-store");
  app.add_option("--store", store_dir, "Store directory (env RATLOP_STORE)");

  // validate / init
  std::string model_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model document");
  validate_cmd->add_option("model", model_file, "Model document")->required();
  auto* init_cmd = app.add_subcommand("init", "Create or replace a BCN in the store");
  init_cmd->add_option("model", model_file, "Model document")->required();

  // assess
  std::string bcn, period_label, maturity_file, matrix_file, evidence_file, indicators_dir,
      weights_text, mode_text = "mean";
  std::optional<std::int64_t> ordinal;
  int threshold = 1, scale_max = 5;
  std::optional<double> ds, qos, ts;
  bool dry_run = false;
  auto* assess_cmd = app.add_subcommand("assess", "Assess one period and record it");
  assess_cmd->add_option("bcn", bcn, "BCN identifier")->required();
  assess_cmd->add_option("period", period_label, "Period label, e.g. 2010-Q1")->required();
  assess_cmd->add_option("--ordinal", ordinal, "Explicit ordinal for non-quarter labels");
  assess_cmd->add_option("--maturity", maturity_file, "org_id,level[,model_id] lines")->required();
  assess_cmd->add_option("--matrix", matrix_file, "4x6 compatibility marks")->required();
  assess_cmd->add_option("--evidence", evidence_file, "row,col,status,finding lines");
  assess_cmd->add_option("--threshold", threshold, "Open findings that mark a cell");
  assess_cmd->add_option("--indicators", indicators_dir,
                         "Directory with servers.csv, links.csv, survey.csv");
  assess_cmd->add_option("--weights", weights_text, "w1,w2,w3 for PI,DC,PO");
  assess_cmd->add_option("--scale", scale_max, "Survey rating scale maximum");
  assess_cmd->add_option("--availability-mode", mode_text, "mean or min")
      ->check(CLI::IsMember({"mean", "min"}));
  assess_cmd->add_option("--ds", ds, "Override DS");
  assess_cmd->add_option("--qos", qos, "Override QoS");
  assess_cmd->add_option("--ts", ts, "Override TS");
  assess_cmd->add_flag("--dry-run", dry_run, "Compute without recording");

  // trend
  std::optional<std::string> from_label, to_label;
  std::string csv_out;
  auto* trend_cmd = app.add_subcommand("trend", "Show the Ratlop series");
  trend_cmd->add_option("bcn", bcn, "BCN identifier")->required();
  trend_cmd->add_option("--from", from_label, "First period label");
  trend_cmd->add_option("--to", to_label, "Last period label");
  trend_cmd->add_option("--csv", csv_out, "Write period,pi,dc,po,ratlop CSV");

  // plan
  double target = 0.0;
  std::string costs_file, json_out;
  long budget_ms = 10000;
  auto* plan_cmd = app.add_subcommand("plan", "Propose a minimal-cost scenario");
  plan_cmd->add_option("bcn", bcn, "BCN identifier")->required();
  plan_cmd->add_option("--target", target, "Target Ratlop")->required();
  plan_cmd->add_option("--costs", costs_file, "Cost model document");
  plan_cmd->add_option("--json", json_out, "Write the scenario document");
  plan_cmd->add_option("--time-budget-ms", budget_ms, "Search time budget");

  // serve
  std::string host = env_or("RATLOP_HOST", "127.0.0.1");
  int port = std::atoi(env_or("RATLOP_PORT", "8080").c_str());
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--host", host, "Listen address (env RATLOP_HOST)");
  serve_cmd->add_option("--port", port, "Listen port (env RATLOP_PORT)");
  serve_cmd->add_option("--static", static_dir, "Directory of web assets to serve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (validate_cmd->parsed()) {
      const auto model = parse_bcn_document(read_text_file(model_file));
      const auto violations = validate_model(model);
      if (violations.empty()) {
        std::cout << "model '" << model.bcn_id << "' is valid\n";
        return 0;
      }
      std::cout << format_violations(violations);
      return kExitDomain;
    }

    if (init_cmd->parsed()) {
      const auto model = parse_bcn_document(read_text_file(model_file));
      const auto violations = validate_model(model);
      if (!violations.empty()) {
        std::cout << format_violations(violations);
        return kExitDomain;
      }
      TimelineStore store(store_dir);
      const bool created = store.put_model(model);
      std::cout << (created ? "created" : "replaced") << " BCN '" << model.bcn_id << "' in "
                << store.root().string() << "\n";
      return 0;
    }

    if (assess_cmd->parsed()) {
      TimelineStore store(store_dir);
      const auto model = store.get_model(bcn);
      AssessmentInputs inputs;
      const auto known = ordinal ? std::nullopt : store.find_period(bcn, period_label);
      inputs.period = known ? *known : canonical_period(period_label, ordinal);
      inputs.maturity = parse_maturity_file(read_text_file(maturity_file));
      inputs.matrix = parse_matrix_file(read_text_file(matrix_file));
      if (!evidence_file.empty())
        attach_evidence(inputs.matrix, parse_evidence_file(read_text_file(evidence_file)),
                        threshold);
      SnapshotConfig config;
      config.scale_max = scale_max;
      config.availability_mode = *parse_aggregation_mode(mode_text);
      config.ds_override = ds;
      config.qos_override = qos;
      config.ts_override = ts;
      if (!indicators_dir.empty())
        inputs.indicators = load_indicator_dir(indicators_dir, inputs.period, config);
      else
        inputs.indicators = IndicatorInputs{{}, {}, {}, config};
      if (!weights_text.empty()) inputs.weights = parse_weights(weights_text);

      auto assessment = prepare_assessment(model, inputs);
      int revision = 0;
      if (!dry_run) revision = store.record_assessment(bcn, assessment);
      std::cout << format_breakdown(assessment.period, revision, assessment.scores);
      return 0;
    }

    if (trend_cmd->parsed()) {
      TimelineStore store(store_dir);
      auto resolve = [&](const std::optional<std::string>& label) -> std::optional<PeriodId> {
        if (!label) return std::nullopt;
        if (auto known = store.find_period(bcn, *label)) return known;
        return canonical_period(*label);
      };
      const auto trend = store.get_trend(bcn, resolve(from_label), resolve(to_label));
      std::cout << format_trend(trend);
      if (!csv_out.empty()) write_file(csv_out, trend_csv(trend));
      return 0;
    }

    if (plan_cmd->parsed()) {
      TimelineStore store(store_dir);
      CostModel costs;
      if (!costs_file.empty()) costs = parse_costs_document(read_text_file(costs_file));
      const auto asis = store.latest_assessment(bcn);
      PlanOptions options;
      options.time_budget = std::chrono::milliseconds(budget_ms);
      const auto scenario = plan(asis, target, costs, options);
      std::cout << "as-is period  " << asis.period.label << "\n" << format_scenario(scenario);
      if (!json_out.empty()) write_file(json_out, dump_document(scenario_to_json(scenario)));
      return 0;
    }

    if (serve_cmd->parsed()) {
      TimelineStore store(store_dir);
      ApiService service(store);
      HttpServer server(service, static_dir.empty()
                                     ? std::nullopt
                                     : std::optional<std::filesystem::path>(static_dir));
      const int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitInput;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    if (!e.details().is_null()) std::cerr << e.details().dump(2) << "\n";
    return exit_code(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [input]: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
