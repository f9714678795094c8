#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "icflow/config.hpp"
#include "icflow/errors.hpp"
#include "icflow/flow.hpp"
#include "icflow/report.hpp"
#include "icflow/verify.hpp"

namespace fs = std::filesystem;
using namespace icflow;

namespace {

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ICFLOW_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
#endif
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct VerifyOutcome {
  std::vector<Verdict> verdicts;
  int exit_code = 0;
};

VerifyOutcome run_verify(const RunConfig& cfg) {
  VerifyOutcome out;
  auto ids = run_identity_suite(cfg.suite);
  auto ineqs = run_inequality_suite(cfg.suite);
  out.verdicts = std::move(ids);
  out.verdicts.insert(out.verdicts.end(), ineqs.begin(), ineqs.end());
  out.exit_code = all_passed(out.verdicts) ? 0 : 1;
  return out;
}

struct FlowOutcome {
  FlowResult result;
  int n = 3, k = 1;
  int exit_code = 0;
};

FlowOutcome run_flow_cmd(const RunConfig& cfg) {
  if (!cfg.shape) throw ConfigError("flow requires a [shape] section");
  if (!cfg.flow) throw ConfigError("flow requires a [flow] section");
  FlowOutcome out;
  out.n = cfg.flow->n;
  out.k = cfg.flow->k;
  out.result = run(*cfg.shape, cfg.grid, *cfg.flow, cfg.record_every);
  out.exit_code = out.result.completed ? 0 : 3;
  return out;
}

int cmd_verify(const std::string& config_path, const std::string& out_override, bool quiet) {
  RunConfig cfg = parse_config_file(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  fs::create_directories(cfg.out_dir);

  const auto outcome = run_verify(cfg);
  write_summary(cfg.out_dir + "/summary.txt", outcome.verdicts, serialize_config(cfg));
  write_residuals_csv(cfg.out_dir + "/residuals.csv",
                      residual_rows_from_verdicts(outcome.verdicts));
  if (!quiet) {
    int fails = 0;
    for (const auto& v : outcome.verdicts)
      if (v.status == Verdict::Status::Fail) ++fails;
    std::cout << "verify: " << outcome.verdicts.size() << " checks, " << fails
              << " failures; reports in " << cfg.out_dir << "\n";
  }
  return outcome.exit_code;
}

int cmd_flow(const std::string& config_path, const std::string& out_override, bool quiet) {
  RunConfig cfg = parse_config_file(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  fs::create_directories(cfg.out_dir);

  const auto outcome = run_flow_cmd(cfg);
  write_series_csv(cfg.out_dir + "/series.csv", outcome.result.records);
  if (cfg.svg)
    write_qk_svg(cfg.out_dir + "/qk.svg", outcome.result.records, outcome.n, outcome.k);

  std::vector<Verdict> verdicts;
  Verdict v;
  v.id = "flow_run";
  v.status = outcome.result.completed ? Verdict::Status::Pass : Verdict::Status::Fail;
  v.value = outcome.result.records.empty() ? 0.0 : outcome.result.records.back().Qk;
  v.detail = outcome.result.completed
                 ? "completed"
                 : outcome.result.error + " at t = " + fmt17(outcome.result.error_time);
  verdicts.push_back(v);
  write_summary(cfg.out_dir + "/summary.txt", verdicts, serialize_config(cfg));

  if (!quiet) {
    std::cout << "flow: " << outcome.result.records.size() << " records; "
              << (outcome.result.completed ? "completed" : "terminated: " + outcome.result.error)
              << "; reports in " << cfg.out_dir << "\n";
  }
  return outcome.exit_code;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& out_override, bool quiet) {
  const auto eq = axis.find('=');
  if (eq == std::string::npos) throw ConfigError("--axis expects key=v1,v2,...");
  const std::string key = axis.substr(0, eq);
  std::vector<std::string> values;
  {
    std::istringstream is(axis.substr(eq + 1));
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) values.push_back(tok);
  }
  if (values.empty()) throw ConfigError("--axis has an empty value list");

  const std::string base_text = read_file(config_path);
  // validate the key and branch configs up front so a bad sweep is exit 2
  std::vector<RunConfig> branch_cfgs;
  for (const auto& v : values)
    branch_cfgs.push_back(parse_config_text(override_key(base_text, key, v)));
  const bool flow_mode = branch_cfgs.front().flow.has_value();

  RunConfig cfg0 = branch_cfgs.front();
  if (!out_override.empty()) cfg0.out_dir = out_override;
  fs::create_directories(cfg0.out_dir);

  int worst = 0;
  if (flow_mode) {
    std::vector<std::future<FlowOutcome>> futs;
    for (const auto& bc : branch_cfgs)
      futs.push_back(std::async(std::launch::async, [bc] { return run_flow_cmd(bc); }));
    bool header = true;
    for (size_t i = 0; i < futs.size(); ++i) {
      const auto outcome = futs[i].get();
      append_series_csv(cfg0.out_dir + "/series.csv", outcome.result.records, values[i],
                        header);
      header = false;
      worst = std::max(worst, outcome.exit_code);
      if (!quiet)
        std::cout << "sweep " << key << "=" << values[i] << ": "
                  << (outcome.result.completed ? "completed" : outcome.result.error) << "\n";
    }
  } else {
    std::vector<std::future<VerifyOutcome>> futs;
    for (const auto& bc : branch_cfgs)
      futs.push_back(std::async(std::launch::async, [bc] { return run_verify(bc); }));
    std::vector<ResidualRow> rows;
    std::vector<Verdict> all;
    for (size_t i = 0; i < futs.size(); ++i) {
      const auto outcome = futs[i].get();
      auto branch_rows = residual_rows_from_verdicts(outcome.verdicts, values[i]);
      rows.insert(rows.end(), branch_rows.begin(), branch_rows.end());
      all.insert(all.end(), outcome.verdicts.begin(), outcome.verdicts.end());
      worst = std::max(worst, outcome.exit_code);
      if (!quiet)
        std::cout << "sweep " << key << "=" << values[i] << ": "
                  << (outcome.exit_code == 0 ? "pass" : "fail") << "\n";
    }
    write_residuals_csv(cfg0.out_dir + "/residuals.csv", rows);
    write_summary(cfg0.out_dir + "/summary.txt", all, serialize_config(cfg0));
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"star-shaped hypersurface flows, curvature integrals and checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, axis;
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress output");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };
  auto* verify = app.add_subcommand("verify", "run the identity and inequality suites");
  add_common(verify);
  auto* flow = app.add_subcommand("flow", "run the curvature flow and emit series");
  add_common(flow);
  auto* sweep = app.add_subcommand("sweep", "run one command across a parameter axis");
  add_common(sweep);
  sweep->add_option("--axis", axis, "swept key and values, section.key=v1,v2,...")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(verify)) return cmd_verify(config_path, out_dir, quiet);
    if (app.got_subcommand(flow)) return cmd_flow(config_path, out_dir, quiet);
    return cmd_sweep(config_path, axis, out_dir, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidK& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedMode& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
