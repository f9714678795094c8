#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "icflow/integrals.hpp"

namespace icflow {

struct FlowConfig {
  enum class Speed { Normalized, Unnormalized, Custom };

  int n = 3;
  int k = 1;
  Speed speed = Speed::Normalized;
  std::function<double(const PointFrame&, const CurvatureData&)> custom_speed;

  double dt_initial = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.3;
  long max_steps = 5'000'000;
  bool fixed_dt = false;       // disable adaptivity (order studies)
  int rescale_every = 0;       // un-normalized flow: divide rho by its mean every s steps
  double convexity_floor = 1e-8;
  double star_floor = 1e-8;

  void validate() const;  // throws ConfigError / InvalidK
};

struct FlowState {
  SurfaceSample sample;
  double t = 0;
  long step_count = 0;
  double last_dt = 0;
};

struct DiagnosticsRecord {
  double t = 0;
  FunctionalSet f;
  double Qk = 0;
  double dQk_dt_estimate = 0;     // centered difference over the record series
  double conservation_drift = 0;  // |I_H[k-1](t) - I_H[k-1](0)| / I_H[k-1](0)
  double min_u = 0;
  double min_Hk = 0;
  double max_absF = 0;
  double diss_term1 = 0;  // (n-1-k) int r^2 (H_{k+1}H_{k-1}/H_k - H_k)
  double diss_term2 = 0;  // -2 int H_k (H_{k-1}/H_k - u)^2
  double diss_term3 = 0;  // -(1/2) int H_k |grad r^2|^2
};

double normal_speed(const PointFrame& frame, const CurvatureData& curv,
                    const FlowConfig& cfg);

// One adaptive explicit RK4 step of d rho/dt = F v / rho.
void step(FlowState& state, const FlowConfig& cfg);

FlowState initial_state(const ShapeSpec& spec, const GridSpec& grid, const FlowConfig& cfg);

struct FlowResult {
  std::vector<DiagnosticsRecord> records;
  bool completed = false;          // reached t_end (or max_steps) without a terminal error
  std::string error;               // terminal error message, when !completed
  double error_time = 0;
};

FlowResult run(const ShapeSpec& spec, const GridSpec& grid, const FlowConfig& cfg,
               double record_every);

// Residuals of the first-variation identities, probed by a centered
// difference in time of radius +/- one RK4 step of size dt_probe.
struct VariationResiduals {
  double res_quermass = 0;  // d/dt int H_{k-1} vs (n-k) int H_k F
  double res_weighted = 0;  // d/dt int r^2 H_k vs its three-term right side
  double res_dr2 = 0;       // max node |d(r^2)/dt - 2 F u|
  double scale_quermass = 0, scale_weighted = 0, scale_dr2 = 0;
};
VariationResiduals check_variation_formulas(const FlowState& state, const FlowConfig& cfg,
                                            double dt_probe);

// The integral dissipation formula for the monotone quantity: finite-difference
// rate of [int r^2 H_k + 2(k-1)/(n+1-k) int H_{k-2}] against the three-term
// right side, each term individually non-positive.
struct MonotonicityCheck {
  double lhs_rate = 0;
  double term1 = 0, term2 = 0, term3 = 0;
  double rhs() const { return term1 + term2 + term3; }
};
MonotonicityCheck check_monotonicity_identity(const FlowState& state, const FlowConfig& cfg,
                                              double dt_probe = 1e-4);

}  // namespace icflow
