// report.hpp -- CSV and JSON emission for traces, cylinders, schedules, and
// summaries. Output is deterministic: the same inputs produce identical bytes.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "betalab/config.hpp"
#include "betalab/expansion.hpp"
#include "betalab/irregularity.hpp"
#include "betalab/language.hpp"
#include "betalab/rational.hpp"
#include "betalab/reals.hpp"

namespace betalab {

constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string digits_str(const std::vector<int>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace detail

inline Json to_json(const RealEnclosure& e) {
  return Json{{"lo", rat_str(e.lo)},
              {"hi", rat_str(e.hi)},
              {"lo_approx", rat_double(e.lo)},
              {"hi_approx", rat_double(e.hi)}};
}

inline Json to_json(const ZeroRunTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows)
    rows.push_back(Json{{"n", row.n}, {"t", row.t}, {"gamma", row.gamma}});
  return Json{{"schema_version", kSchemaVersion},
              {"beta", table.base.spec_string()},
              {"rows", rows},
              {"lambda_hat", rat_str(table.lambda_hat)},
              {"lambda_hat_approx", rat_double(table.lambda_hat)},
              {"lambda_hat_at", table.lambda_at}};
}

inline void write_csv(std::ostream& os, const ZeroRunTable& table) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "n,t,gamma\n";
  for (const auto& row : table.rows) os << row.n << ',' << row.t << ',' << row.gamma << "\n";
}

inline Json to_json(const LanguageSlice& slice) {
  Json words = Json::array();
  for (const auto& w : slice.words) words.push_back(detail::digits_str(w));
  return Json{{"schema_version", kSchemaVersion},
              {"beta", slice.base.spec_string()},
              {"n", slice.n},
              {"count", slice.count()},
              {"words", words}};
}

inline void write_csv(std::ostream& os, const LanguageSlice& slice) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "word\n";
  for (const auto& w : slice.words) os << detail::digits_str(w) << "\n";
}

inline Json to_json(const CylinderInfo& info, const Rational& eps) {
  RealEnclosure left = info.left.enclosure(eps);
  RealEnclosure len = info.length.enclosure(eps);
  return Json{{"word", detail::digits_str(info.word.digits)},
              {"left", to_json(left)},
              {"length", to_json(len)},
              {"k_star", info.k_star},
              {"full", fullness_str(info.fullness)}};
}

inline void write_csv_header_cylinder(std::ostream& os) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "word,left_lo,left_hi,len_lo,len_hi,k_star,full\n";
}

inline void write_csv_row(std::ostream& os, const CylinderInfo& info, const Rational& eps) {
  RealEnclosure left = info.left.enclosure(eps);
  RealEnclosure len = info.length.enclosure(eps);
  os << detail::digits_str(info.word.digits) << ',' << detail::fmt_double(rat_double(left.lo))
     << ',' << detail::fmt_double(rat_double(left.hi)) << ','
     << detail::fmt_double(rat_double(len.lo)) << ',' << detail::fmt_double(rat_double(len.hi))
     << ',' << info.k_star << ',' << fullness_str(info.fullness) << "\n";
}

inline Json to_json(const DensityRecord& rec) {
  return Json{{"n", rec.n},
              {"d_lo", rec.d_lo},
              {"d_hi", rec.d_hi},
              {"k_star", rec.k_star},
              {"t_aux", rec.t_aux},
              {"gamma", rec.gamma},
              {"full", fullness_str(rec.fullness)},
              {"bracket_ok", rec.bracket_ok}};
}

inline Json to_json(const DensityTrace& trace) {
  Json records = Json::array();
  for (const auto& rec : trace.records) records.push_back(to_json(rec));
  return Json{{"schema_version", kSchemaVersion},
              {"beta", trace.base.spec_string()},
              {"source", trace.source},
              {"records", records}};
}

inline void write_csv(std::ostream& os, const DensityTrace& trace) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "n,d_lo,d_hi,k_star,t_aux,gamma,full\n";
  for (const auto& rec : trace.records)
    os << rec.n << ',' << detail::fmt_double(rec.d_lo) << ',' << detail::fmt_double(rec.d_hi)
       << ',' << rec.k_star << ',' << rec.t_aux << ',' << rec.gamma << ','
       << fullness_str(rec.fullness) << "\n";
}

inline Json to_json(const DensitySummary& s) {
  return Json{{"schema_version", kSchemaVersion},
              {"beta", s.base.spec_string()},
              {"tail_start", s.tail_start},
              {"tail_count", s.tail_count},
              {"gap_tol", s.gap_tol},
              {"d_lower_estimate", s.d_lower},
              {"d_upper_estimate", s.d_upper},
              {"tau_hat", s.tau_hat},
              {"lemma_gap", s.lemma_gap},
              {"brackets_exact", s.brackets_exact},
              {"max_gap", s.max_gap},
              {"coverage_ok", s.coverage_ok},
              {"note", "finite-depth estimates, not limit values"}};
}

inline Json to_json(const ConstructionSchedule& sched) {
  Json blocks = Json::array();
  for (const auto& b : sched.blocks)
    blocks.push_back(Json{{"m", b.m},
                          {"t", b.t},
                          {"h", b.h},
                          {"n", b.n},
                          {"end", b.end},
                          {"ratio", b.ratio}});
  return Json{{"schema_version", kSchemaVersion},
              {"beta", sched.base.spec_string()},
              {"seed", detail::digits_str(sched.seed)},
              {"gamma_seed", sched.gamma_seed},
              {"r", sched.r},
              {"search_cap", sched.search_cap},
              {"lambda_hat", rat_str(sched.lambda_hat)},
              {"lambda_hat_approx", rat_double(sched.lambda_hat)},
              {"lambda_zero", sched.lambda_zero},
              {"blocks", blocks},
              {"total_length", sched.total_length}};
}

inline Json to_json(const SpikeReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(Json{{"k", c.k},
                          {"n", c.n},
                          {"t", c.t},
                          {"d_lo", c.d_lo},
                          {"d_hi", c.d_hi},
                          {"target_lo", c.target_lo},
                          {"target_hi", c.target_hi},
                          {"bracket_ok", c.bracket_ok},
                          {"full_ok", c.full_ok}});
  return Json{{"schema_version", kSchemaVersion},
              {"beta", report.base.spec_string()},
              {"lambda_hat", rat_str(report.lambda_hat)},
              {"spike_target", report.spike_target},
              {"checks", checks}};
}

inline Json error_json(const Error& e) {
  Json j{{"schema_version", kSchemaVersion}, {"error", e.kind}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const PrecisionExhausted*>(&e);
      pe && pe->has_ambiguous_integer)
    j["ambiguous_integer"] = pe->ambiguous_integer;
  if (const auto* ce = dynamic_cast<const ConfigParseError*>(&e)) j["line"] = ce->line;
  return j;
}

}  // namespace betalab
