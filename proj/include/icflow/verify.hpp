#pragma once

#include <string>
#include <vector>

#include "icflow/flow.hpp"
#include "icflow/integrals.hpp"

namespace icflow {

struct SuiteConfig {
  std::vector<ShapeSpec> shapes;            // each carries its own n
  std::vector<int> ks;                      // empty = all valid k per shape
  std::vector<int> rungs = {24, 48, 96};    // grid ladder, strictly increasing
  int p = 4;
  GridSpec::Mode mode = GridSpec::Mode::Axisym1D;
  // time probes for the variation identities; kept inside the single-step
  // RK4 stability window of the finest default rung
  std::vector<double> dt_probes = {3.2e-4, 1.6e-4, 8e-5};

  double tau_abs = 1e-10;
  double tau_rel = 1e-10;
  double min_order_slack = 0.3;   // pass if measured order >= min(p,2) - slack

  // flow suite parameters
  double flow_t_end = 6.0;
  double flow_record_every = 0.25;
  double flow_cfl = 0.3;

  void validate() const;
  static SuiteConfig default_suite();   // spheres, 2 ellipsoids, 2 perturbed spheres; n in {3,4,5}
};

struct Verdict {
  enum class Status { Pass, Fail, Skipped };
  std::string id;
  Status status = Status::Pass;
  double value = 0;       // offending/representative number
  double tolerance = 0;
  double order = 0;       // measured convergence order where applicable (0 = n/a)
  std::string detail;
};

std::vector<Verdict> run_identity_suite(const SuiteConfig& cfg);
std::vector<Verdict> run_inequality_suite(const SuiteConfig& cfg);
std::vector<Verdict> run_flow_suite(const SuiteConfig& cfg);

bool all_passed(const std::vector<Verdict>& vs);

// Least-squares slope of log(residual) against log(1/N); residuals at or
// below `floor` short-circuit to +inf ("exact").
double measured_order(const std::vector<double>& Ns, const std::vector<double>& res,
                      double floor);

// Stable text form used for determinism checks and reports (17 significant digits).
std::string verdicts_digest(const std::vector<Verdict>& vs);

// Plain-text fixture records with a checksum line (append-only files).
struct FixtureRecord {
  std::string shape;
  int n = 3, k = 1;
  std::vector<double> I_H;
  double I_r2Hk = 0, vol = 0;
};
std::vector<FixtureRecord> load_fixtures(const std::string& path);  // verifies checksum
void save_fixtures(const std::string& path, const std::vector<FixtureRecord>& recs);
ShapeSpec shape_from_string(const std::string& desc);  // parses ShapeSpec::describe output

}  // namespace icflow
