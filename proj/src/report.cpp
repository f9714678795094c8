#include "icflow/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "icflow/constants.hpp"
#include "icflow/errors.hpp"

namespace icflow {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const char* status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Pass: return "PASS";
    case Verdict::Status::Fail: return "FAIL";
    default: return "SKIP";
  }
}

std::vector<std::string> split_slash(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, '/')) out.push_back(tok);
  return out;
}

bool int_token(const std::string& t, char prefix, int& out) {
  if (t.size() < 2 || t[0] != prefix) return false;
  for (size_t i = 1; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  out = std::stoi(t.substr(1));
  return true;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

}  // namespace

void write_summary(const std::string& path, const std::vector<Verdict>& verdicts,
                   const std::string& resolved_config) {
  auto f = open_or_throw(path);
  int pass = 0, fail = 0, skip = 0;
  for (const auto& v : verdicts) {
    if (v.status == Verdict::Status::Pass) ++pass;
    else if (v.status == Verdict::Status::Fail) ++fail;
    else ++skip;
  }
  f << "checks: " << verdicts.size() << "  pass: " << pass << "  fail: " << fail
    << "  skipped: " << skip << "\n";
  f << "result: " << (fail == 0 ? "OK" : "FAILED") << "\n\n";
  for (const auto& v : verdicts) {
    f << status_name(v.status) << "  " << v.id << "  value=" << fmt17(v.value)
      << " tol=" << fmt17(v.tolerance);
    if (v.order != 0) f << " order=" << fmt17(v.order);
    if (!v.detail.empty()) f << "  [" << v.detail << "]";
    f << "\n";
  }
  if (!resolved_config.empty()) {
    f << "\n# resolved configuration\n";
    std::istringstream is(resolved_config);
    std::string line;
    while (std::getline(is, line)) f << "#   " << line << "\n";
  }
}

static const char* kSeriesHeader =
    "sweep,t,Qk,IH_0,IH_1,IH_2,IH_3,IH_4,IH_5,IH_6,Ir2Hk,vol,drift,"
    "min_u,min_Hk,max_absF,diss1,diss2,diss3,dQk_dt\n";

static void series_rows(std::ofstream& f, const std::vector<DiagnosticsRecord>& recs,
                        const std::string& sweep_value) {
  for (const auto& r : recs) {
    f << sweep_value << "," << fmt17(r.t) << "," << fmt17(r.Qk);
    for (int j = 0; j <= 6; ++j) f << "," << fmt17(r.f.IH(j));
    const int k = r.f.k;
    const double ir2 = k < static_cast<int>(r.f.I_r2H.size()) ? r.f.I_r2H[k] : 0.0;
    f << "," << fmt17(ir2) << "," << fmt17(r.f.vol) << "," << fmt17(r.conservation_drift)
      << "," << fmt17(r.min_u) << "," << fmt17(r.min_Hk) << "," << fmt17(r.max_absF)
      << "," << fmt17(r.diss_term1) << "," << fmt17(r.diss_term2) << ","
      << fmt17(r.diss_term3) << "," << fmt17(r.dQk_dt_estimate) << "\n";
  }
}

void write_series_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                      const std::string& sweep_value) {
  auto f = open_or_throw(path);
  f << kSeriesHeader;
  series_rows(f, recs, sweep_value);
}

void append_series_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                       const std::string& sweep_value, bool header) {
  std::ofstream f(path, header ? std::ios::out : std::ios::app);
  if (!f) throw ConfigError("cannot write " + path);
  if (header) f << kSeriesHeader;
  series_rows(f, recs, sweep_value);
}

void write_residuals_csv(const std::string& path, const std::vector<ResidualRow>& rows) {
  auto f = open_or_throw(path);
  f << "sweep,fixture,n,k,rung,check,residual,order,tolerance,status\n";
  for (const auto& r : rows) {
    f << r.sweep_value << "," << r.fixture << "," << r.n << "," << r.k << "," << r.rung
      << "," << r.check << "," << fmt17(r.residual) << "," << fmt17(r.order) << ","
      << fmt17(r.tolerance) << "," << r.status << "\n";
  }
}

std::vector<ResidualRow> residual_rows_from_verdicts(const std::vector<Verdict>& vs,
                                                     const std::string& sweep_value) {
  std::vector<ResidualRow> rows;
  rows.reserve(vs.size());
  for (const auto& v : vs) {
    ResidualRow row;
    row.sweep_value = sweep_value;
    row.residual = v.value;
    row.order = v.order;
    row.tolerance = v.tolerance;
    row.status = status_name(v.status);
    auto parts = split_slash(v.id);
    if (!parts.empty()) {
      row.check = parts.front();
      parts.erase(parts.begin());
    }
    // trailing tokens: k<k> and the fixture tag (which itself contains "n<d>")
    std::vector<std::string> fixture_parts;
    for (const auto& t : parts) {
      int val;
      if (int_token(t, 'k', val)) {
        row.k = val;
      } else {
        if (int_token(t, 'n', val)) row.n = val;
        fixture_parts.push_back(t);
      }
    }
    for (size_t i = 0; i < fixture_parts.size(); ++i)
      row.fixture += (i ? "/" : "") + fixture_parts[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_qk_svg(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                  int n, int k) {
  auto f = open_or_throw(path);
  const int W = 720, H = 420, M = 60;
  const double limit = static_cast<double>(n + k - 1) / (n - k + 1) * omega(n);

  double t0 = 0, t1 = 1, y0 = limit, y1 = limit;
  if (!recs.empty()) {
    t0 = recs.front().t;
    t1 = recs.back().t;
    for (const auto& r : recs) {
      y0 = std::min(y0, r.Qk);
      y1 = std::max(y1, r.Qk);
    }
  }
  if (t1 <= t0) t1 = t0 + 1;
  const double pad = std::max(1e-12, 0.08 * (y1 - y0));
  y0 -= pad;
  y1 += pad;

  auto px = [&](double t) { return M + (t - t0) / (t1 - t0) * (W - 2 * M); };
  auto py = [&](double q) { return H - M - (q - y0) / (y1 - y0) * (H - 2 * M); };

  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  f << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  f << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\""
    << H - M << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n";
  // round-sphere limit reference
  f << "<line x1=\"" << M << "\" y1=\"" << py(limit) << "\" x2=\"" << W - M << "\" y2=\""
    << py(limit) << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
  f << "<text x=\"" << W - M + 4 << "\" y=\"" << py(limit) + 4
    << "\" font-size=\"12\" fill=\"#888\">limit</text>\n";
  if (!recs.empty()) {
    f << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : recs) f << px(r.t) << "," << py(r.Qk) << " ";
    f << "\"/>\n";
  }
  f << "<text x=\"" << M << "\" y=\"" << M - 12 << "\" font-size=\"14\">Q_k(t), n=" << n
    << " k=" << k << "</text>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" font-size=\"12\">t in ["
    << fmt17(t0) << ", " << fmt17(t1) << "]</text>\n";
  f << "<text x=\"8\" y=\"" << H / 2 << "\" font-size=\"12\">[" << fmt17(y0) << ", "
    << fmt17(y1) << "]</text>\n";
  f << "</svg>\n";
}

}  // namespace icflow
