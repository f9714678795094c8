#pragma once

#include <string>
#include <vector>

#include "icflow/config.hpp"
#include "icflow/flow.hpp"
#include "icflow/verify.hpp"

namespace icflow {

// All numbers serialized with 17 significant digits so fixtures round-trip
// exactly in binary64.
std::string fmt17(double x);

struct ResidualRow {
  std::string sweep_value;  // empty outside sweeps
  std::string fixture;
  int n = 0, k = 0, rung = 0;
  std::string check;
  double residual = 0, order = 0, tolerance = 0;
  std::string status;
};

void write_summary(const std::string& path, const std::vector<Verdict>& verdicts,
                   const std::string& resolved_config);
void write_series_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                      const std::string& sweep_value = "");
void append_series_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                       const std::string& sweep_value, bool header);
void write_residuals_csv(const std::string& path, const std::vector<ResidualRow>& rows);
std::vector<ResidualRow> residual_rows_from_verdicts(const std::vector<Verdict>& vs,
                                                     const std::string& sweep_value = "");

// Static SVG line chart of Q_k(t) with a horizontal reference line at the
// round-sphere limit value.
void write_qk_svg(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                  int n, int k);

}  // namespace icflow
