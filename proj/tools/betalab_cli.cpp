// betalab -- command-line front end: digit expansions, zero-run tables,
// admissibility, cylinder geometry, density traces, the irregular-point
// construction, the spectrum formula, and the property-check suite.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betalab/config.hpp"
#include "betalab/digitstream.hpp"
#include "betalab/errors.hpp"
#include "betalab/expansion.hpp"
#include "betalab/irregularity.hpp"
#include "betalab/language.hpp"
#include "betalab/report.hpp"
#include "betalab/verify.hpp"

namespace {

using namespace betalab;

std::vector<int> parse_word_digits(const std::string& s) {
  std::vector<int> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw DomainError("bad digit token '" + tok + "' in word");
    }
  }
  if (out.empty()) throw DomainError("empty word");
  return out;
}

Rational parse_x(const std::string& s) {
  if (s.find('/') != std::string::npos) return parse_rational(s);
  return parse_decimal(s);
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw DomainError("cannot open output file '" + path + "'");
      os = &file;
    }
  }
  std::ostream& stream() { return *os; }
};

void emit_json(Output& out, const Json& j) { out.stream() << j.dump(2) << "\n"; }

void emit_digits(Output& out, const RunConfig& cfg, const std::string& what, const Word& w) {
  if (cfg.format == "json") {
    emit_json(out, Json{{"schema_version", kSchemaVersion},
                        {"beta", w.base.spec_string()},
                        {"what", what},
                        {"digits", w.digits}});
  } else {
    out.stream() << w.str() << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"certified beta-expansion toolkit"};
  app.require_subcommand(1);

  std::string config_path, beta_spec, x_str, word_str, out_path, format;
  std::size_t n = 0;
  bool greedy = false, constructed = false;
  double lambda = 0, delta = 0, gap_tol = 0.2;
  std::size_t tail_start = 0;
  std::string trace_out;
  std::vector<std::string> beta_specs;
  long inject_kstar = 0;
  unsigned ratio = 0;
  std::size_t blocks = 0, search_cap = 0;
  std::string seed_str = "1";
  std::string eps_str;

  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--format", format, "output format: csv or json");
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--eps", eps_str, "target enclosure width (rational or decimal)");
  app.add_option("--ratio", ratio, "schedule ratio r (m_k >= r*h_k)");
  app.add_option("--blocks", blocks, "schedule block count K");
  app.add_option("--search-cap", search_cap, "schedule search cap");

  auto* cmd_expand = app.add_subcommand("expand", "digits of x in (0,1]");
  cmd_expand->add_option("--beta", beta_spec)->required();
  cmd_expand->add_option("--x", x_str)->required();
  cmd_expand->add_option("-n", n)->required();
  cmd_expand->add_flag("--greedy", greedy, "floor-based variant on [0,1)");

  auto* cmd_one = app.add_subcommand("one", "expansion of 1");
  cmd_one->add_option("--beta", beta_spec)->required();
  cmd_one->add_option("-n", n)->required();

  auto* cmd_zeroruns = app.add_subcommand("zeroruns", "t_n / Gamma_n / lambda-hat table");
  cmd_zeroruns->add_option("--beta", beta_spec)->required();
  cmd_zeroruns->add_option("-n", n)->required();

  auto* cmd_admissible = app.add_subcommand("admissible", "check a word");
  cmd_admissible->add_option("--beta", beta_spec)->required();
  cmd_admissible->add_option("--word", word_str)->required();

  auto* cmd_enumerate = app.add_subcommand("enumerate", "admissible words of length n");
  cmd_enumerate->add_option("--beta", beta_spec)->required();
  cmd_enumerate->add_option("-n", n)->required();

  auto* cmd_cylinder = app.add_subcommand("cylinder", "cylinder data for a word");
  cmd_cylinder->add_option("--beta", beta_spec)->required();
  cmd_cylinder->add_option("--word", word_str)->required();

  auto* cmd_trace = app.add_subcommand("trace", "density trace for x or a constructed point");
  cmd_trace->add_option("--beta", beta_spec)->required();
  cmd_trace->add_option("--x", x_str);
  cmd_trace->add_flag("--constructed", constructed, "trace the scheduled irregular point");
  cmd_trace->add_option("-n", n);
  cmd_trace->add_option("--summary-tail", tail_start, "emit a density summary over n >= this");
  cmd_trace->add_option("--gap-tol", gap_tol, "coverage tolerance for the summary");

  auto* cmd_construct = app.add_subcommand("construct", "schedule + irregular point + spike check");
  cmd_construct->add_option("--beta", beta_spec)->required();
  cmd_construct->add_option("--seed", seed_str, "seed word (default 1)");
  cmd_construct->add_option("--trace-out", trace_out, "also write the density trace CSV here");

  auto* cmd_spectrum = app.add_subcommand("spectrum", "dimension spectrum value");
  cmd_spectrum->add_option("--lambda", lambda)->required();
  cmd_spectrum->add_option("--delta", delta)->required();

  auto* cmd_verify = app.add_subcommand("verify", "run the property-check suite");
  cmd_verify->add_option("--beta", beta_specs, "base spec (repeatable)")->required();
  cmd_verify->add_option("--inject-kstar-offset", inject_kstar,
                         "fault injection: offset k* in the oracle check");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (!format.empty()) {
    if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
    cfg.format = format;
  }
  if (!out_path.empty()) cfg.out = out_path;
  if (!eps_str.empty()) {
    cfg.eps = detail::parse_eps_value(eps_str);
    if (cfg.eps <= 0) throw DomainError("eps must be positive");
  }
  if (ratio != 0) cfg.r = ratio;
  if (blocks != 0) cfg.blocks = blocks;
  if (search_cap != 0) cfg.search_cap = search_cap;

  Output out(cfg.out);

  if (*cmd_spectrum) {
    double v = spectrum_dim(lambda, delta);
    if (cfg.format == "json")
      emit_json(out, Json{{"schema_version", kSchemaVersion},
                          {"lambda", lambda},
                          {"delta", delta},
                          {"dimension", v}});
    else
      out.stream() << detail::fmt_double(v) << "\n";
    return 0;
  }

  if (*cmd_verify) {
    std::vector<Beta> bases;
    for (const auto& s : beta_specs) bases.push_back(Beta::parse(s));
    VerifyOptions opt;
    opt.k_star_offset = inject_kstar;
    VerifyReport report = verify_suite(bases, opt);
    if (cfg.format == "json") {
      emit_json(out, to_json(report));
    } else {
      out.stream() << "# schema_version=" << kSchemaVersion << "\n";
      out.stream() << "name,beta,status,detail\n";
      for (const auto& c : report.checks)
        out.stream() << c.name << ',' << c.beta_spec << ',' << c.status << ",\"" << c.detail
                     << "\"\n";
    }
    return report.ok() ? 0 : 1;
  }

  Beta beta = Beta::parse(beta_spec);

  if (*cmd_expand) {
    Rational x = parse_x(x_str);
    Word w = greedy ? greedy_digits(beta, beta.constant(x), n) : digits(beta, x, n);
    emit_digits(out, cfg, greedy ? "greedy-digits" : "digits", w);
  } else if (*cmd_one) {
    emit_digits(out, cfg, "expansion-of-one", expansion_of_one(beta, n));
  } else if (*cmd_zeroruns) {
    ZeroRunTable table = zero_run_table(beta, n, cfg.zero_run_budget);
    if (cfg.format == "json") {
      emit_json(out, to_json(table));
    } else {
      write_csv(out.stream(), table);
      out.stream() << "# lambda_hat=" << rat_str(table.lambda_hat) << " at n=" << table.lambda_at
                   << "\n";
    }
  } else if (*cmd_admissible) {
    std::vector<int> w = parse_word_digits(word_str);
    bool adm = is_admissible(beta, w);
    if (cfg.format == "json")
      emit_json(out, Json{{"schema_version", kSchemaVersion},
                          {"beta", beta.spec_string()},
                          {"word", detail::digits_str(w)},
                          {"admissible", adm}});
    else
      out.stream() << (adm ? "admissible" : "inadmissible") << "\n";
  } else if (*cmd_enumerate) {
    LanguageSlice slice = enumerate_words(beta, n, cfg.enum_cap);
    if (cfg.format == "json")
      emit_json(out, to_json(slice));
    else
      write_csv(out.stream(), slice);
  } else if (*cmd_cylinder) {
    CylinderInfo info = cylinder(beta, parse_word_digits(word_str));
    if (cfg.format == "json") {
      Json j = to_json(info, cfg.eps);
      j["schema_version"] = kSchemaVersion;
      emit_json(out, j);
    } else {
      write_csv_header_cylinder(out.stream());
      write_csv_row(out.stream(), info, cfg.eps);
    }
  } else if (*cmd_trace) {
    DigitStream source;
    std::size_t N = n;
    if (constructed) {
      ConstructionSchedule sched =
          schedule(beta, parse_word_digits(seed_str), cfg.blocks, cfg.r, cfg.search_cap);
      IrregularPoint point = build_irregular(beta, sched);
      source = point.stream;
      if (N == 0) N = sched.total_length;
    } else {
      if (x_str.empty()) throw DomainError("trace needs --x or --constructed");
      if (N == 0) throw DomainError("trace needs -n");
      source = point_stream(beta, parse_x(x_str));
    }
    DensityTrace trace = density_trace(beta, source, N);
    if (tail_start != 0) {
      emit_json(out, to_json(density_summary(trace, tail_start, gap_tol)));
    } else if (cfg.format == "json") {
      emit_json(out, to_json(trace));
    } else {
      write_csv(out.stream(), trace);
    }
  } else if (*cmd_construct) {
    ConstructionSchedule sched =
        schedule(beta, parse_word_digits(seed_str), cfg.blocks, cfg.r, cfg.search_cap);
    IrregularPoint point = build_irregular(beta, sched);
    DensityTrace trace = density_trace(beta, point.stream, sched.total_length);
    if (!trace_out.empty()) {
      std::ofstream tf(trace_out);
      if (!tf) throw DomainError("cannot open trace output file '" + trace_out + "'");
      write_csv(tf, trace);
    }
    SpikeReport spike = verify_spike(beta, sched, trace);  // throws on violation
    DensitySummary summary =
        density_summary(trace, std::max<std::size_t>(1, sched.blocks.front().n), gap_tol);
    emit_json(out, Json{{"schema_version", kSchemaVersion},
                        {"schedule", to_json(sched)},
                        {"point", to_json(point.enclosure)},
                        {"spike_report", to_json(spike)},
                        {"summary", to_json(summary)}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const betalab::InvalidBetaSpec& e) {
    std::cerr << betalab::error_json(e).dump() << "\n";
    return 2;
  } catch (const betalab::ConfigParseError& e) {
    std::cerr << betalab::error_json(e).dump() << "\n";
    return 2;
  } catch (const betalab::DomainError& e) {
    std::cerr << betalab::error_json(e).dump() << "\n";
    return 2;
  } catch (const betalab::Error& e) {
    std::cerr << betalab::error_json(e).dump() << "\n";
    return 1;
  }
}
