#ifndef GEONUM_REPORT_HPP
#define GEONUM_REPORT_HPP

// JSON views of the library's results. Needs nlohmann/json (vendor/json.hpp).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "geonum/counting.hpp"
#include "geonum/haar.hpp"
#include "geonum/minima.hpp"
#include "geonum/semicontinuity.hpp"
#include "geonum/witness.hpp"

namespace geonum {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Infinite values become null; JSON has no infinity.
inline Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json real_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real(x));
  return a;
}

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json to_json(const LatticePoint& p) { return Json{{"coeffs", p.coeffs}, {"coords", vector_json(p.coords)}}; }

inline Json basis_json(const Lattice& l) {
  Json cols = Json::array();
  for (int j = 0; j < l.dim(); ++j) cols.push_back(vector_json(l.basis().col(j)));
  return cols;
}

inline Json to_json(const MinimaResult& m) {
  Json w = Json::array();
  for (const auto& p : m.witnesses) w.push_back(to_json(p));
  return Json{{"values", real_array(m.values)},
              {"witnesses", w},
              {"exact", m.exact},
              {"attained", m.attained()},
              {"rank_deficit", m.rank_deficit},
              {"search_radius", real(m.search_radius)}};
}

inline Json to_json(const HaarSample2D& s) {
  return Json{{"x", s.x}, {"y", s.y}, {"rotation", s.rotation}, {"basis", basis_json(s.lattice)}};
}

inline Json to_json(const MomentReport& r) {
  Json regions = Json::array();
  for (const auto& m : r.regions) {
    regions.push_back(Json{{"region", m.region},
                           {"volume", m.volume},
                           {"centre", m.centre},
                           {"mean", m.counts.mean},
                           {"mean_stderr", m.counts.stderr_mean},
                           {"variance", m.counts.variance},
                           {"mean_z", m.mean_z},
                           {"second_moment", m.second_moment},
                           {"second_moment_stderr", m.second_moment_stderr},
                           {"ratio_volume", m.ratio_volume},
                           {"ratio_volume_log2", m.ratio_volume_log},
                           {"counts", m.per_sample}});
  }
  return Json{{"d", r.dim}, {"samples", r.samples}, {"regions", regions}, {"log_ratio_spread", r.log_ratio_spread}};
}

inline Json to_json(const Theorem2Report& r) {
  Json fractions = Json::array();
  for (std::size_t t = 0; t < r.thresholds.size(); ++t) {
    fractions.push_back(Json{{"threshold", r.thresholds[t]}, {"fraction", r.fraction_below[t]}});
  }
  Json per = Json::array();
  for (const auto& seq : r.lambda_d) per.push_back(real_array(seq));
  return Json{{"body", r.body},
              {"budgets", r.budgets},
              {"samples", r.samples},
              {"median", real_array(r.median)},
              {"fraction_below", fractions},
              {"monotone_violations", r.monotone_violations},
              {"lambda_d", per}};
}

inline Json to_json(const Shell& s, const Partition2D& p, const ShellWitness& w) {
  Json rec{{"n", s.index},
           {"rho_in", s.inner_radius},
           {"rho_out", s.outer_radius},
           {"est_volume", s.est_volume},
           {"stderr", s.stderr_volume},
           {"threshold", s.threshold},
           {"quadrant_masses", p.masses},
           {"partition", Json{{"center", p.center}, {"angle", p.angle}}}};
  if (w.tuple) {
    Json pts = Json::array();
    for (const auto& q : w.tuple->points) pts.push_back(to_json(q));
    rec["tuple"] = Json{{"points", pts}, {"quadrants", w.tuple->quadrants}};
  } else {
    rec["failure"] = Json{{"kind", "QuadrantEmpty"}, {"empty_quadrants", w.empty_quadrants}, {"truncated", w.truncated}};
  }
  return rec;
}

inline Json to_json(const MissRateReport& r) {
  return Json{{"n", r.shell},
              {"samples", r.samples},
              {"misses", r.misses},
              {"rate", r.rate},
              {"interval", {r.interval.lo, r.interval.hi}},
              {"quadrant_misses", r.quadrant_misses}};
}

inline Json to_json(const ProbeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"i", row.i},
                        {"value", real(row.value)},
                        {"reference", real(row.reference)},
                        {"upper_ok", row.upper_ok},
                        {"converge_ok", row.converge_ok}});
  }
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(Json{{"n", f.n}, {"error", f.error}});
  return Json{{"body", r.body},     {"bounded", r.bounded},       {"reference", real_array(r.reference)},
              {"rows", rows},       {"failures", failures},       {"all_upper", r.all_upper},
              {"all_converge", r.all_converge}};
}

/// 64-bit FNV-1a of the canonical (sorted-key, compact) dump, as hex.
inline std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Wraps a result with the provenance every report carries.
inline Json envelope(const std::string& command, const Json& config, std::uint64_t seed, Json result) {
  return Json{{"command", command},
              {"version", kVersion},
              {"seed", seed},
              {"config", config},
              {"config_hash", config_hash(config)},
              {"result", std::move(result)}};
}

}  // namespace geonum

#endif  // GEONUM_REPORT_HPP
