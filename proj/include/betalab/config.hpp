// config.hpp -- flat key = value run configuration with defaults and strict
// validation; command-line flags override file values.

#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "betalab/errors.hpp"
#include "betalab/expansion.hpp"
#include "betalab/language.hpp"
#include "betalab/rational.hpp"

namespace betalab {

struct RunConfig {
  Rational eps = pow2(-64);  // target enclosure width for reported endpoints
  unsigned max_bits = BetaImpl::kDefaultMaxBits;
  std::size_t zero_run_budget = kDefaultZeroRunBudget;
  std::size_t enum_cap = kDefaultEnumerationCap;
  unsigned r = 10;  // schedule ratio: m_k >= r * h_k
  std::size_t blocks = 2;
  std::size_t search_cap = 400;
  std::string format = "csv";  // csv | json
  std::string out;             // output path; empty means stdout
};

namespace detail {

inline std::string trim_ws(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline Rational parse_eps_value(const std::string& v) {
  if (v.find('/') != std::string::npos) return parse_rational(v);
  return parse_decimal(v);
}

inline unsigned long parse_count(const std::string& v) {
  std::size_t pos = 0;
  unsigned long n = std::stoul(v, &pos);
  if (pos != v.size()) throw DomainError("trailing characters");
  return n;
}

}  // namespace detail

// Applies one key = value pair; throws DomainError on unknown keys or values
// violating the config invariants.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "eps") {
    cfg.eps = detail::parse_eps_value(value);
    if (cfg.eps <= 0) throw DomainError("eps must be positive");
  } else if (key == "max_bits") {
    cfg.max_bits = static_cast<unsigned>(detail::parse_count(value));
    if (cfg.max_bits == 0) throw DomainError("max_bits must be positive");
  } else if (key == "zero_run_budget") {
    cfg.zero_run_budget = detail::parse_count(value);
    if (cfg.zero_run_budget == 0) throw DomainError("zero_run_budget must be positive");
  } else if (key == "enum_cap") {
    cfg.enum_cap = detail::parse_count(value);
    if (cfg.enum_cap == 0) throw DomainError("enum_cap must be positive");
  } else if (key == "r" || key == "ratio") {
    cfg.r = static_cast<unsigned>(detail::parse_count(value));
    if (cfg.r == 0) throw DomainError("r must be positive");
  } else if (key == "blocks" || key == "K") {
    cfg.blocks = detail::parse_count(value);
    if (cfg.blocks == 0) throw DomainError("blocks must be positive");
  } else if (key == "search_cap") {
    cfg.search_cap = detail::parse_count(value);
    if (cfg.search_cap == 0) throw DomainError("search_cap must be positive");
  } else if (key == "format") {
    if (value != "csv" && value != "json") throw DomainError("format must be csv or json");
    cfg.format = value;
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw DomainError("unknown key '" + key + "'");
  }
}

// key = value lines, '#' starts a comment, blank lines ignored.
inline RunConfig load_config_text(const std::string& text, RunConfig cfg = {}) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string stripped = detail::trim_ws(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("expected key = value", lineno);
    std::string key = detail::trim_ws(stripped.substr(0, eq));
    std::string value = detail::trim_ws(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigParseError("empty key or value", lineno);
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigParseError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigParseError(std::string(e.what()), lineno);
    } catch (const std::exception&) {
      throw ConfigParseError("bad value '" + value + "' for key '" + key + "'", lineno);
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str(), std::move(cfg));
}

}  // namespace betalab
