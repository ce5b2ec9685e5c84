// Batch driver: an experiment config in, a CSV or JSON table out.
// Exit codes: 0 success, 1 invalid input, 2 resource refusal.

#ifndef POLYFLAT_DRIVER_HPP_
#define POLYFLAT_DRIVER_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "classify.hpp"
#include "diameter.hpp"
#include "io.hpp"
#include "modp.hpp"
#include "profiler.hpp"

namespace polyflat {

enum ExitCode : int { exit_ok = 0, exit_invalid = 1, exit_refused = 2 };

struct ExperimentConfig {
  std::string command;
  Json payload;  // command-specific keys
  std::optional<std::string> out;
  std::string format = "csv";
  std::uint64_t bfs_cap = default_bfs_cap;
  unsigned threads = 1;
  bool timings = false;
  double tail_fraction = 0.5;
  double alpha = 0.9;
  double c = 1.0;
  std::optional<std::pair<double, double>> slope_band;

  /// Validates every key before anything is computed.
  static ExperimentConfig from_json(const Json& j) {
    static const std::set<std::string> common{"command", "out", "format", "bfs_cap", "threads",
                                              "timings", "tail_fraction", "alpha", "c", "slope_band"};
    static const std::map<std::string, std::set<std::string>> specific{
        {"heis-quotients", {"p_max", "p_min"}},
        {"heis-cosets", {"n_max", "n_min"}},
        {"zsemidirect", {"family"}},
        {"classify", {"matrix", "matrices"}},
        {"lcs", {"matrices"}},
        {"primes", {"poly", "polys", "p_max"}},
        {"density", {"poly", "p_max"}},
        {"sandwich", {"tower"}},
    };
    if (!j.is_object())
      fail("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.command = io::require(j, "command", "config").get<std::string>();
    auto it = specific.find(cfg.command);
    if (it == specific.end())
      fail("unknown command '" + cfg.command + "'");
    std::set<std::string> allowed = common;
    allowed.insert(it->second.begin(), it->second.end());
    io::reject_unknown_keys(j, allowed, "config for " + cfg.command);
    cfg.payload = Json::object();
    for (const auto& key : it->second)
      if (j.contains(key))
        cfg.payload[key] = j.at(key);
    if (j.contains("out"))
      cfg.out = j.at("out").get<std::string>();
    if (j.contains("format")) {
      cfg.format = j.at("format").get<std::string>();
      if (cfg.format != "csv" && cfg.format != "json")
        fail("format must be csv or json");
    }
    if (j.contains("bfs_cap"))
      cfg.bfs_cap = io::positive_int(j.at("bfs_cap"), "bfs_cap");
    if (j.contains("threads"))
      cfg.threads = static_cast<unsigned>(io::positive_int(j.at("threads"), "threads"));
    if (j.contains("timings"))
      cfg.timings = j.at("timings").get<bool>();
    auto number = [&](const char* key, double& dst) {
      if (!j.contains(key))
        return;
      if (!j.at(key).is_number())
        fail(std::string(key) + " must be a number");
      dst = j.at(key).get<double>();
    };
    number("tail_fraction", cfg.tail_fraction);
    number("alpha", cfg.alpha);
    number("c", cfg.c);
    if (!(cfg.tail_fraction > 0 && cfg.tail_fraction <= 1))
      fail("tail_fraction must lie in (0, 1]");
    if (!(cfg.alpha > 0 && cfg.alpha <= 1))
      fail("alpha must lie in (0, 1]");
    if (!(cfg.c > 0))
      fail("c must be positive");
    if (j.contains("slope_band")) {
      const auto& b = j.at("slope_band");
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
        fail("slope_band must be [low, high]");
      cfg.slope_band = std::make_pair(b[0].get<double>(), b[1].get<double>());
    }
    cfg.check_payload();
    return cfg;
  }

  Json to_json() const {
    Json j = payload;
    j["command"] = command;
    j["format"] = format;
    j["bfs_cap"] = bfs_cap;
    j["threads"] = threads;
    j["timings"] = timings;
    j["tail_fraction"] = tail_fraction;
    j["alpha"] = alpha;
    j["c"] = c;
    if (out)
      j["out"] = *out;
    if (slope_band)
      j["slope_band"] = {slope_band->first, slope_band->second};
    return j;
  }

 private:
  void check_payload() const {
    auto need = [&](const char* key) { io::require(payload, key, "config for " + command); };
    if (command == "heis-quotients")
      need("p_max");
    else if (command == "heis-cosets")
      need("n_max");
    else if (command == "zsemidirect")
      need("family");
    else if (command == "classify") {
      if (payload.contains("matrix") == payload.contains("matrices"))
        fail("classify needs exactly one of 'matrix' or 'matrices'");
    } else if (command == "lcs")
      need("matrices");
    else if (command == "primes") {
      need("p_max");
      if (payload.contains("poly") == payload.contains("polys"))
        fail("primes needs exactly one of 'poly' or 'polys'");
    } else if (command == "density") {
      need("poly");
      need("p_max");
    } else if (command == "sandwich")
      need("tower");
  }
};

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string records_output(const std::vector<FlatnessRecord>& records,
                                  const ExperimentConfig& cfg, const Json& family) {
  if (cfg.format == "csv") {
    std::string out = io::csv_header() + "\n";
    for (const auto& r : records)
      out += io::csv_row(r) + "\n";
    return out;
  }
  Json rows = Json::array();
  for (const auto& r : records)
    rows.push_back(io::to_json(r));
  Json fit = nullptr;
  try {
    ExponentFit f = fit_exponent(records, cfg.tail_fraction);
    fit = io::to_json(f);
    if (cfg.slope_band)
      fit["in_band"] = f.slope >= cfg.slope_band->first && f.slope <= cfg.slope_band->second;
  } catch (const ValidationError& e) {
    fit = {{"error", e.what()}};
  }
  Json cfg_json = cfg.to_json();
  cfg_json["family"] = family;
  Json summary{{"records", rows},
               {"fit", fit},
               {"violation", io::to_json(violation_search(records, cfg.alpha, cfg.c), cfg.alpha, cfg.c)},
               {"config", cfg_json}};
  return summary.dump(2) + "\n";
}

inline std::vector<std::string> series_rows(const LcsReport& s) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    auto idx = lattice_index(s.terms[i]);
    rows.push_back(std::to_string(i + 1) + "," + std::to_string(s.terms[i].rank()) + "," +
                   (idx ? idx->str() : "infinite") + "," +
                   csv_escape(io::to_json(s.terms[i]).dump()));
  }
  return rows;
}

inline Json series_json(const LcsReport& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms)
    terms.push_back(io::to_json(t));
  return {{"terms", terms},
          {"nilpotent", s.nilpotent},
          {"class", s.nilpotent ? Json(s.nilpotency_class) : Json(nullptr)},
          {"stabilised_at", s.stabilised_at}};
}

inline std::string density_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string run_command(const ExperimentConfig& cfg) {
  const Json& in = cfg.payload;
  SweepOptions opt{cfg.bfs_cap, cfg.threads, cfg.timings};

  if (cfg.command == "heis-quotients" || cfg.command == "heis-cosets" || cfg.command == "zsemidirect") {
    FamilySpec spec;
    if (cfg.command == "zsemidirect") {
      spec = io::family_from_json(in.at("family"));
    } else {
      bool q = cfg.command == "heis-quotients";
      spec.kind = q ? FamilyKind::heis_quotients : FamilyKind::heis_cosets;
      spec.param_max = io::positive_int(in.at(q ? "p_max" : "n_max"), q ? "p_max" : "n_max");
      if (in.contains(q ? "p_min" : "n_min"))
        spec.param_min = io::positive_int(in.at(q ? "p_min" : "n_min"), "minimum parameter");
      spec.validate();
    }
    auto records = sweep(spec, opt);
    return records_output(records, cfg, io::to_json(spec));
  }

  if (cfg.command == "classify") {
    std::vector<IntMatrix> ms = in.contains("matrix")
                                    ? std::vector<IntMatrix>{io::matrix_from_json(in.at("matrix"))}
                                    : io::matrices_from_json(in.at("matrices"));
    Classification c = classify_zn_by_zm(ms);
    if (cfg.format == "csv") {
      return "virtually_nilpotent,nilpotent,witness_matrix_index,class\n" +
             std::string(c.virtually_nilpotent ? "true" : "false") + "," +
             (c.nilpotent ? "true" : "false") + "," +
             (c.witness_matrix_index ? std::to_string(*c.witness_matrix_index) : "") + "," +
             (c.nilpotent ? std::to_string(c.series.nilpotency_class) : "") + "\n";
    }
    Json mats = Json::array();
    for (const auto& m : ms)
      mats.push_back(io::to_json(m));
    Json j{{"matrices", mats},
           {"virtually_nilpotent", c.virtually_nilpotent},
           {"nilpotent", c.nilpotent},
           {"witness_matrix_index",
            c.witness_matrix_index ? Json(*c.witness_matrix_index) : Json(nullptr)},
           {"series", series_json(c.series)}};
    return j.dump(2) + "\n";
  }

  if (cfg.command == "lcs") {
    LcsReport s = lower_central_series(io::matrices_from_json(in.at("matrices")));
    if (cfg.format == "csv") {
      std::string out = "term,rank,index,basis\n";
      for (const auto& r : series_rows(s))
        out += r + "\n";
      return out;
    }
    return series_json(s).dump(2) + "\n";
  }

  if (cfg.command == "primes") {
    std::vector<IntPoly> polys;
    if (in.contains("poly"))
      polys.push_back(io::poly_from_json(in.at("poly")));
    else
      for (const auto& p : in.at("polys"))
        polys.push_back(io::poly_from_json(p));
    u64 p_max = io::positive_int(in.at("p_max"), "p_max");
    auto primes = splitting_primes(polys, p_max, cfg.threads);
    if (cfg.format == "csv") {
      std::string out = "p\n";
      for (auto p : primes)
        out += std::to_string(p) + "\n";
      return out;
    }
    Json names = Json::array();
    for (const auto& f : polys)
      names.push_back(io::format_poly(f));
    return Json{{"polys", names}, {"p_max", p_max}, {"primes", primes}}.dump(2) + "\n";
  }

  if (cfg.command == "density") {
    IntPoly f = io::poly_from_json(in.at("poly"));
    u64 p_max = io::positive_int(in.at("p_max"), "p_max");
    Rational d = splitting_density(f, p_max, cfg.threads);
    double value = d.convert_to<double>();
    auto hits = splitting_primes({f}, p_max, cfg.threads).size();
    auto total = primes_up_to(p_max).size();
    if (cfg.format == "csv")
      return "poly,p_max,hits,total,density\n" + io::format_poly(f) + "," + std::to_string(p_max) + "," +
             std::to_string(hits) + "," + std::to_string(total) + "," + Json(value).dump() + "\n";
    return Json{{"poly", io::format_poly(f)}, {"p_max", p_max},  {"hits", hits},
                {"total", total},            {"density", density_string(d)}, {"value", value}}
               .dump(2) +
           "\n";
  }

  // sandwich
  const Json& t = in.at("tower");
  io::reject_unknown_keys(t, {"group", "subgroup_moduli"}, "tower");
  TriangularQuotient gk = io::triangular_from_json(io::require(t, "group", "tower"));
  std::vector<std::int64_t> hm;
  for (const auto& q : io::require(t, "subgroup_moduli", "tower"))
    hm.push_back(static_cast<std::int64_t>(io::positive_int(q, "subgroup modulus")));
  if (hm.size() != gk.arity())
    fail("subgroup_moduli must have one entry per generator");
  SubgroupTower tower(gk, divisible_by(hm), {}, cfg.bfs_cap);
  SandwichResult r = tower.sandwich_check();
  if (cfg.format == "csv")
    return "d1,d2,d3,holds,t_size\n" + std::to_string(r.d1) + "," + std::to_string(r.d2) + "," +
           std::to_string(r.d3) + "," + (r.holds ? "true" : "false") + "," + std::to_string(r.t_size) +
           "\n";
  return Json{{"d1", r.d1}, {"d2", r.d2}, {"d3", r.d3}, {"holds", r.holds}, {"t_size", r.t_size}}.dump(2) +
         "\n";
}

// Write through a temporary file so a failed run never leaves partial output.
inline void write_atomically(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f)
      throw ValidationError("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f)
      throw ValidationError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace detail

/// Runs a validated config; results go to cfg.out or to `out`.
inline int run(const ExperimentConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    std::string result = detail::run_command(cfg);
    if (cfg.out)
      detail::write_atomically(*cfg.out, result);
    else
      out << result;
    return exit_ok;
  } catch (const ResourceRefusal& e) {
    err << "refused: " << e.what() << "\n";
    return exit_refused;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }
}

/// Parses and runs a JSON config text.
inline int run(const std::string& config_text, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json(Json::parse(config_text));
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  return run(cfg, out, err);
}

}  // namespace polyflat

#endif  // POLYFLAT_DRIVER_HPP_
