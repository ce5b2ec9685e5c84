// polyflat: command-line front end. Every subcommand is translated into an
// experiment config and handed to polyflat::run, so `run --config FILE`
// and the flag form produce identical output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyflat/driver.hpp"

namespace {

using polyflat::Json;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw polyflat::ValidationError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// A FILE argument, or inline JSON when no such file exists.
Json json_argument(const std::string& arg) {
  std::string text = std::filesystem::is_regular_file(arg) ? slurp(arg) : arg;
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw polyflat::ValidationError("cannot parse JSON from '" + arg + "': " + e.what());
  }
}

// A polynomial: a file holding an expression or JSON, an inline JSON array,
// or an inline expression such as "x^2-3x+1".
Json poly_argument(const std::string& arg) {
  std::string text = std::filesystem::is_regular_file(arg) ? slurp(arg) : arg;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '"'))
    return Json::parse(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.pop_back();
  return text;
}

struct Common {
  std::string out;
  std::string format = "csv";
  std::uint64_t bfs_cap = polyflat::default_bfs_cap;
  unsigned threads = 1;
  bool timings = false;
  double tail_fraction = 0.5;
  double alpha = 0.9;
  double c = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--out", out, "Write results to this file (atomically) instead of stdout");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--bfs-cap", bfs_cap, "Refuse coset spaces with more states than this");
    app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--timings", timings, "Fill the runtime_ms column (otherwise 0)");
    app->add_option("--tail-fraction", tail_fraction, "Fraction of records used by the exponent fit");
    app->add_option("--alpha", alpha, "Exponent for the violation search");
    app->add_option("--c", c, "Constant for the violation search");
  }

  void fill(Json& cfg) const {
    if (!out.empty())
      cfg["out"] = out;
    cfg["format"] = format;
    cfg["bfs_cap"] = bfs_cap;
    cfg["threads"] = threads;
    cfg["timings"] = timings;
    cfg["tail_fraction"] = tail_fraction;
    cfg["alpha"] = alpha;
    cfg["c"] = c;
  }
};

const char* poly_help =
    "Polynomial: an expression in x with integer coefficients (e.g. \"x^2-3x+1\", \"-2*x^3+x-7\"),\n"
    "a JSON coefficient array with the constant term first (e.g. [1,-3,1]), or a file holding either.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite quotients of polycyclic groups: diameters, almost-flat exponents and\n"
               "virtual nilpotence of Z^n x| Z^m.\n" +
               std::string(poly_help)};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 invalid input, 2 resource refusal.");

  Common common;
  Json cfg;

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config (JSON file)");
  run->add_option("--config", config_path, "Config file")->required();

  std::uint64_t p_max = 0, n_max = 0, p_min = 1, n_min = 1;
  auto* hq = app.add_subcommand("heis-quotients", "Sweep H/K_p over primes p <= p-max");
  hq->add_option("--p-max", p_max)->required();
  hq->add_option("--p-min", p_min);
  common.attach(hq);

  auto* hc = app.add_subcommand("heis-cosets", "Sweep H/H_n for n <= n-max");
  hc->add_option("--n-max", n_max)->required();
  hc->add_option("--n-min", n_min);
  common.attach(hc);

  std::string spec_arg, matrix_arg, matrices_arg, poly_arg;
  auto* zs = app.add_subcommand("zsemidirect", "Sweep a Z^n x| Z or Z^n x| Z^m family spec");
  zs->add_option("--spec", spec_arg, "Family spec JSON (file or inline)")->required();
  common.attach(zs);

  auto* cl = app.add_subcommand("classify", "Virtual nilpotence of Z^n x| Z^m");
  auto* cl_m = cl->add_option("--matrix", matrix_arg, "One matrix (JSON file or inline)");
  auto* cl_ms = cl->add_option("--matrices", matrices_arg, "Array of commuting matrices");
  cl_m->excludes(cl_ms);
  common.attach(cl);

  auto* lcs = app.add_subcommand("lcs", "Lower central series of Z^n x| Z^m");
  lcs->add_option("--matrices", matrices_arg, "Array of commuting matrices")->required();
  common.attach(lcs);

  auto* pr = app.add_subcommand("primes", "Primes p <= p-max over which the polynomial splits");
  pr->add_option("--poly", poly_arg, poly_help)->required();
  pr->add_option("--p-max", p_max)->required();
  common.attach(pr);

  auto* de = app.add_subcommand("density", "Density of splitting primes up to p-max");
  de->add_option("--poly", poly_arg, poly_help)->required();
  de->add_option("--p-max", p_max)->required();
  common.attach(de);

  auto* sw = app.add_subcommand("sandwich", "Diameter inequalities for a tower K <= H <= G");
  sw->add_option("--spec", spec_arg, "Tower JSON {group, subgroup_moduli}")->required();
  common.attach(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return polyflat::exit_invalid;
  }

  try {
    if (run->parsed())
      return polyflat::run(slurp(config_path));

    if (hq->parsed()) {
      cfg = {{"command", "heis-quotients"}, {"p_max", p_max}, {"p_min", p_min}};
    } else if (hc->parsed()) {
      cfg = {{"command", "heis-cosets"}, {"n_max", n_max}, {"n_min", n_min}};
    } else if (zs->parsed()) {
      cfg = {{"command", "zsemidirect"}, {"family", json_argument(spec_arg)}};
    } else if (cl->parsed()) {
      cfg = {{"command", "classify"}};
      if (!matrix_arg.empty())
        cfg["matrix"] = json_argument(matrix_arg);
      else if (!matrices_arg.empty())
        cfg["matrices"] = json_argument(matrices_arg);
      else
        throw polyflat::ValidationError("classify needs --matrix or --matrices");
    } else if (lcs->parsed()) {
      cfg = {{"command", "lcs"}, {"matrices", json_argument(matrices_arg)}};
    } else if (pr->parsed()) {
      cfg = {{"command", "primes"}, {"poly", poly_argument(poly_arg)}, {"p_max", p_max}};
    } else if (de->parsed()) {
      cfg = {{"command", "density"}, {"poly", poly_argument(poly_arg)}, {"p_max", p_max}};
    } else {
      cfg = {{"command", "sandwich"}, {"tower", json_argument(spec_arg)}};
    }
    common.fill(cfg);
  } catch (const polyflat::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return polyflat::exit_invalid;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return polyflat::exit_invalid;
  }
  return polyflat::run(cfg.dump());
}
