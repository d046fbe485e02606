#include "rnewton/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rnewton {

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

// Write-to-temp-then-rename keeps failed runs from leaving partial files.
void commit_file(const std::filesystem::path& path, const std::string& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open output file: " + tmp.string());
    out << body;
    if (!out.good()) throw DomainError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

double nan_or(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

json json_number(double x) {
  // JSON has no NaN literal; report it as null.
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const ConvergenceTrace& trace) {
  const std::vector<double> d = trace.distances();
  std::ostringstream body;
  body << "k,residual_norm,step_norm,dist_to_solution,ratio_q,quad_quotient,"
          "inverse_norm_estimate\n";
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const IterationRecord& rec = trace.records[k];
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double quad = std::numeric_limits<double>::quiet_NaN();
    if (k + 1 < d.size() && d[k] > 0.0 && std::isfinite(d[k]) &&
        std::isfinite(d[k + 1])) {
      ratio = d[k + 1] / d[k];
      quad = d[k + 1] / (d[k] * d[k]);
    }
    body << rec.k << ',' << fmt17(rec.residual_norm) << ','
         << fmt17(rec.step_norm) << ',' << fmt17(nan_or(rec.dist_to_solution))
         << ',' << fmt17(ratio) << ',' << fmt17(quad) << ','
         << fmt17(rec.inverse_norm_estimate) << '\n';
  }
  commit_file(path, body.str());
}

void write_report_json(const std::filesystem::path& path,
                       const std::string& problem_name,
                       const ConvergenceTrace& trace, const RateReport& rate) {
  json j;
  j["problem"] = problem_name;
  j["termination"] = to_string(trace.termination);
  j["records"] = trace.records.size();
  j["steps"] = trace.records.empty() ? 0 : trace.records.size() - 1;
  j["final_residual"] = json_number(trace.records.back().residual_norm);
  j["proxy_distance"] = trace.proxy_distance;

  json jr;
  jr["classification"] = to_string(rate.classification);
  jr["usable_iterations"] = rate.usable_iterations;
  jr["floor_truncation_index"] = rate.floor_truncation_index;
  jr["reason"] = rate.reason;
  json ratios = json::array();
  for (double q : rate.ratios) ratios.push_back(json_number(q));
  jr["ratios"] = std::move(ratios);
  json quads = json::array();
  for (double q : rate.quad_quotients) quads.push_back(json_number(q));
  jr["quad_quotients"] = std::move(quads);
  json jt;
  jt["q_drop_factor"] = rate.thresholds.q_drop_factor;
  jt["q_final_max"] = rate.thresholds.q_final_max;
  jt["quad_band_factor"] = rate.thresholds.quad_band_factor;
  jt["linear_band"] = rate.thresholds.linear_band;
  jt["distance_floor"] = rate.thresholds.distance_floor;
  jt["min_usable"] = rate.thresholds.min_usable;
  jr["thresholds"] = std::move(jt);
  j["rate"] = std::move(jr);

  commit_file(path, j.dump(2) + "\n");
}

void write_spread_json(const std::filesystem::path& path,
                       const std::string& manifold_name,
                       const SpreadEstimate& estimate) {
  json j;
  j["manifold"] = manifold_name;
  j["radius"] = estimate.radius;
  j["samples"] = estimate.samples;
  j["seed"] = estimate.seed;
  j["estimate"] = estimate.estimate;
  json base = json::array();
  for (int i = 0; i < estimate.base.coords.size(); ++i) {
    base.push_back(estimate.base.coords(i));
  }
  j["base_point"] = std::move(base);
  commit_file(path, j.dump(2) + "\n");
}

void write_spread_csv(const std::filesystem::path& path,
                      const std::string& manifold_name,
                      const SpreadEstimate& estimate) {
  std::ostringstream body;
  body << "manifold,radius,samples,seed,estimate\n";
  body << manifold_name << ',' << fmt17(estimate.radius) << ','
       << estimate.samples << ',' << estimate.seed << ','
       << fmt17(estimate.estimate) << '\n';
  commit_file(path, body.str());
}

}  // namespace rnewton
