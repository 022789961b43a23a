// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_CONFIG_HPP
#define MPOLAR_CONFIG_HPP

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mpolar/common.hpp"
#include "mpolar/params.hpp"

namespace mpolar {

// Plain-text configuration: one `section.key = value` per line, '#' comments.
// Every key can be overridden from the environment with the prefix MPOLAR_,
// dots replaced by underscores and upper-cased (params.mu -> MPOLAR_PARAMS_MU),
// which is what batch sweeps use.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      c.parse_line(line, path, lineno);
    }
    c.apply_env_overrides();
    return c;
  }

  static Config from_string(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      c.parse_line(line, "<string>", lineno);
    }
    c.apply_env_overrides();
    return c;
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto v = get(key);
    return v ? *v : dflt;
  }

  Real get_real(const std::string& key, Real dflt) const {
    auto v = get(key);
    if (!v) return dflt;
    try {
      std::size_t pos = 0;
      Real r = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return r;
    } catch (...) {
      throw IoError("config: key " + key + " is not a number: '" + *v + "'");
    }
  }

  long get_int(const std::string& key, long dflt) const {
    auto v = get(key);
    if (!v) return dflt;
    try {
      std::size_t pos = 0;
      long r = std::stol(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return r;
    } catch (...) {
      throw IoError("config: key " + key + " is not an integer: '" + *v + "'");
    }
  }

  bool get_bool(const std::string& key, bool dflt) const {
    auto v = get(key);
    if (!v) return dflt;
    if (*v == "true" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "off") return false;
    throw IoError("config: key " + key + " is not a boolean: '" + *v + "'");
  }

  std::vector<Real> get_real_list(const std::string& key,
                                  std::vector<Real> dflt) const {
    auto v = get(key);
    if (!v) return dflt;
    std::vector<Real> out;
    std::istringstream in(*v);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!trim(tok).empty()) out.push_back(std::stod(trim(tok)));
    return out;
  }

  std::vector<int> get_int_list(const std::string& key,
                                std::vector<int> dflt) const {
    auto v = get(key);
    if (!v) return dflt;
    std::vector<int> out;
    std::istringstream in(*v);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!trim(tok).empty()) out.push_back(std::stoi(trim(tok)));
    return out;
  }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  Params params() const {
    Params p;
    p.mu = get_real("params.mu", p.mu);
    p.gamma = get_real("params.gamma", p.gamma);
    p.chi = get_real("params.chi", p.chi);
    p.kappa = get_real("params.kappa", p.kappa);
    p.eta = get_real("params.eta", p.eta);
    p.beta = get_real("params.beta", p.beta);
    return p;
  }

  RunConfig run() const {
    RunConfig r;
    r.grid_n = static_cast<int>(get_int("run.grid_n", r.grid_n));
    r.box_length = get_real("run.box_length", r.box_length);
    r.dt = get_real("run.dt", r.dt);
    r.t_end = get_real("run.t_end", r.t_end);
    r.t_star = get_real("run.t_star", r.t_star);
    r.record_every = static_cast<int>(get_int("run.record_every", r.record_every));
    r.dealias = get_bool("run.dealias", r.dealias);
    r.seed = static_cast<std::uint64_t>(get_int("run.seed", static_cast<long>(r.seed)));
    r.linear_only = get_bool("run.linear_only", r.linear_only);
    r.cfl_safety = get_real("run.cfl_safety", r.cfl_safety);
    r.duhamel_shadow = get_bool("run.duhamel_shadow", r.duhamel_shadow);
    r.checkpoint_times = get_real_list("run.checkpoint_times", {});
    r.norm_orders = get_int_list("run.norm_orders", r.norm_orders);
    return r;
  }

  // Canonical (sorted) echo of the configuration; also what gets hashed into
  // the run manifest.
  std::string canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
    return os.str();
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  void parse_line(const std::string& raw, const std::string& src, int lineno) {
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config: " + src + ":" + std::to_string(lineno) +
                    ": expected 'key = value', got '" + trim(raw) + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw IoError("config: " + src + ":" + std::to_string(lineno) +
                    ": empty key");
    kv_[key] = val;
  }

  void apply_env_overrides() {
    for (auto& [k, v] : kv_) {
      std::string env = "MPOLAR_";
      for (char c : k)
        env += (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (const char* e = std::getenv(env.c_str())) v = e;
    }
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace mpolar

#endif  // MPOLAR_CONFIG_HPP
