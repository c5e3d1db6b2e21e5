// chainmetric: generate sample spaces, evaluate hop-bounded chain metrics,
// and run the built-in verification suite.
//
// Exit codes: 0 success, 1 failed verification or runtime error, 2 usage.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chainmetric/chains.hpp"
#include "chainmetric/generators.hpp"
#include "chainmetric/io.hpp"
#include "chainmetric/length.hpp"
#include "chainmetric/util.hpp"
#include "chainmetric/verify.hpp"

namespace cm = chainmetric;

namespace {

// "K=64" -> params["K"] = 64 (integer tokens stay integers so generator
// preconditions on counts see the right type)
void apply_param(nlohmann::json& params, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("parameter must be key=value: " + kv);
  std::string key = kv.substr(0, eq);
  std::string val = kv.substr(eq + 1);
  char* end = nullptr;
  long as_int = std::strtol(val.c_str(), &end, 10);
  if (end && *end == '\0' && val.find_first_of(".eE") == std::string::npos) {
    params[key] = as_int;
    return;
  }
  double as_double = std::strtod(val.c_str(), &end);
  if (end && *end == '\0' && !val.empty()) {
    params[key] = as_double;
    return;
  }
  params[key] = val;
}

std::vector<double> split_doubles(const std::string& csv,
                                  const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t next = csv.find(',', pos);
    std::string tok = csv.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || !end || *end != '\0')
      throw std::invalid_argument(what + ": bad number '" + tok + "'");
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument(what + ": empty list");
  return out;
}

// landmark name, "#<id>", or a bare id that names no landmark
cm::PointId parse_point(const cm::FiniteMetricSpace& s,
                        const std::string& tok) {
  if (auto id = s.find_landmark(tok)) return *id;
  std::string digits = tok;
  if (!digits.empty() && digits[0] == '#') digits.erase(0, 1);
  if (!digits.empty() &&
      std::all_of(digits.begin(), digits.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    unsigned long v = std::stoul(digits);
    if (v >= s.size())
      throw std::invalid_argument("point id out of range: " + tok);
    return cm::PointId(v);
  }
  throw std::invalid_argument("unknown point '" + tok +
                              "' (use a landmark name or #id)");
}

std::pair<cm::PointId, cm::PointId> parse_pair(const cm::FiniteMetricSpace& s,
                                               const std::string& pair) {
  auto comma = pair.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--pair wants two points: a,b");
  return {parse_point(s, pair.substr(0, comma)),
          parse_point(s, pair.substr(comma + 1))};
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

cm::EdgeFilter cut_respecting(const cm::FiniteMetricSpace& s) {
  return [&s](cm::PointId a, cm::PointId b) {
    return !cm::slit_crossing(s.point(a), s.point(b));
  };
}

cm::DistanceMatrix dense_matrix(const cm::FiniteMetricSpace& s) {
  if (s.matrix()) return *s.matrix();
  if (s.size() > 4096)
    throw std::invalid_argument(
        "space too large to materialize as an explicit matrix");
  cm::DistanceMatrix m(s.size());
  for (cm::PointId i = 0; i < s.size(); ++i)
    for (cm::PointId j = i + 1; j < s.size(); ++j) {
      double d = s.distance(i, j);
      if (d != std::numeric_limits<double>::infinity()) m.set(i, j, d);
    }
  return m;
}

int run_gen(const std::string& name, const std::vector<std::string>& kvs,
            const std::string& out) {
  nlohmann::json params = nlohmann::json::object();
  for (const std::string& kv : kvs) apply_param(params, kv);
  cm::FiniteMetricSpace s = cm::generate_named(name, params);
  cm::save_space(out, s);
  std::cout << out << ": " << s.size() << " points, resolution "
            << cm::fmt17(s.resolution()) << "\n";
  return 0;
}

int run_chain(const std::string& space_file, double eps,
              const std::string& source, const std::string& target,
              bool constrained, const std::string& out) {
  cm::FiniteMetricSpace s = cm::load_space(space_file);
  cm::ChainQueryOptions opts;
  if (constrained) opts.admissible = cut_respecting(s);

  if (!source.empty() || !target.empty()) {
    if (source.empty() || target.empty())
      throw std::invalid_argument("--source and --target go together");
    cm::PointId a = parse_point(s, source), b = parse_point(s, target);
    cm::ExtReal v = cm::chain_eval(s, eps, a, b, opts);
    std::cout << cm::fmt17(v.value()) << "\n";
    return 0;
  }

  if (out.empty())
    throw std::invalid_argument(
        "full-matrix mode needs --out (or pass --source/--target)");
  cm::DistanceMatrix m = cm::chain_metric_all(s, eps, opts);
  if (ends_with(out, ".csv"))
    cm::write_matrix_csv(out, m);
  else
    cm::write_matrix(out, m);
  std::cout << out << ": " << m.size() << " x " << m.size() << "\n";
  return 0;
}

int run_d0(const std::string& space_file, const std::string& pair,
           const std::string& schedule_csv, double rtol) {
  cm::FiniteMetricSpace s = cm::load_space(space_file);
  auto [a, b] = parse_pair(s, pair);
  cm::EpsSchedule schedule;
  schedule.values = split_doubles(schedule_csv, "--schedule");
  cm::ConvergenceReport rep = cm::estimate_d0(s, a, b, schedule, rtol);
  for (std::size_t i = 0; i < rep.estimates.size(); ++i)
    std::cout << "eps " << cm::fmt17(rep.schedule.values[i]) << " estimate "
              << cm::fmt17(rep.estimates[i].value()) << "\n";
  std::cout << "final " << cm::fmt17(rep.final_estimate.value())
            << "\nmonotone " << (rep.monotone ? "true" : "false")
            << "\nconverged " << (rep.converged ? "true" : "false") << "\n";
  if (rep.disconnected_at)
    std::cout << "disconnected_at " << cm::fmt17(*rep.disconnected_at) << "\n";
  return 0;
}

int run_iterate(const std::string& space_file, const std::string& levels_csv,
                const std::string& pair) {
  cm::FiniteMetricSpace s = cm::load_space(space_file);
  auto [a, b] = parse_pair(s, pair);
  std::vector<double> eps_levels = split_doubles(levels_csv, "--levels");
  cm::DistanceMatrix base = dense_matrix(s);
  cm::IterateResult res = cm::iterate_chain(base, eps_levels);
  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    std::cout << "level " << i;
    if (i > 0) std::cout << " eps " << cm::fmt17(eps_levels[i - 1]);
    std::cout << " value " << cm::fmt17(res.levels[i].raw(a, b)) << "\n";
  }
  if (res.stabilized_at)
    std::cout << "stabilized_at " << *res.stabilized_at << "\n";
  return 0;
}

int run_length(const std::string& path_file) {
  std::ifstream is(path_file);
  if (!is) throw std::invalid_argument("cannot open: " + path_file);
  nlohmann::json j = nlohmann::json::parse(is);

  cm::ExtReal len(0.0);
  if (j.contains("space")) {
    cm::FiniteMetricSpace s = cm::load_space(j.at("space").get<std::string>());
    std::vector<cm::PointId> ids;
    for (const auto& v : j.at("ids")) ids.push_back(v.get<cm::PointId>());
    len = cm::polyline_length(s, ids);
  } else {
    cm::MetricKind kind =
        cm::metric_kind_from_string(j.at("metric_kind").get<std::string>());
    std::vector<cm::SparsePoint> vertices;
    for (const auto& pj : j.at("vertices")) {
      std::vector<cm::SparsePoint::Coord> cs;
      for (const auto& c : pj.at("coords"))
        cs.push_back({c.at(0).get<std::uint32_t>(), c.at(1).get<double>()});
      vertices.push_back(cm::SparsePoint::make(std::move(cs)));
    }
    len = cm::polyline_length(vertices, kind);
  }
  std::cout << cm::fmt17(len.value()) << "\n";
  return 0;
}

int run_waypoints(const std::string& space_file, double eps,
                  const std::string& pair, double delta, bool constrained) {
  cm::FiniteMetricSpace s = cm::load_space(space_file);
  auto [a, b] = parse_pair(s, pair);
  cm::ChainQueryOptions opts;
  if (constrained) opts.admissible = cut_respecting(s);
  cm::WaypointResult w = cm::extract_waypoints(s, eps, a, b, delta, opts);
  std::cout << "total " << cm::fmt17(w.total) << "\n";
  for (std::size_t i = 0; i < w.waypoints.size(); ++i)
    std::cout << "waypoint " << i << " id " << w.waypoints[i] << " leg "
              << cm::fmt17(w.legs[i]) << "\n";
  std::cout << "last_leg " << cm::fmt17(w.last_leg) << "\nresidual "
            << cm::fmt17(w.residual) << "\n";
  return 0;
}

int run_verify(const std::string& preset_name, const std::string& out) {
  cm::VerifyConfig config;
  config.preset = cm::preset_from_string(preset_name);
  cm::VerifyReport report = cm::run_verify_suite(config);
  std::cout << report.table();
  if (!out.empty()) {
    std::ofstream os(out, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << report.full_json().dump(2) << '\n';
  }
  std::cout << (report.all_pass ? "all claims pass" : "FAILURES above")
            << "\n";
  return report.all_pass ? 0 : 1;
}

int run_sweep(const std::string& space_spec, const std::string& h_csv,
              const std::string& eps_csv, const std::string& from,
              const std::string& to, bool constrained,
              const std::string& csv_out) {
  std::istringstream spec(space_spec);
  std::string generator;
  spec >> generator;
  if (generator.empty())
    throw std::invalid_argument("--space-spec wants 'generator key=value...'");
  nlohmann::json params = nlohmann::json::object();
  std::string kv;
  while (spec >> kv) apply_param(params, kv);

  std::string csv = cm::sweep_csv(generator, params,
                                  split_doubles(h_csv, "--h-grid"),
                                  split_doubles(eps_csv, "--eps-grid"), from,
                                  to, constrained);
  std::ofstream os(csv_out, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + csv_out);
  os << csv;
  std::cout << csv_out << ": " << std::count(csv.begin(), csv.end(), '\n') - 1
            << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chain metrics on finite samples of metric spaces"};
  app.require_subcommand(1);

  std::function<int()> run;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a named space to a file");
  static std::string gen_name, gen_out;
  static std::vector<std::string> gen_params;
  gen->add_option("generator", gen_name, "generator name")->required();
  gen->add_option("params", gen_params, "key=value generator parameters");
  gen->add_option("--out", gen_out, "space file to write")->required();
  gen->callback([&] { run = [] { return run_gen(gen_name, gen_params, gen_out); }; });

  // chain
  auto* chain = app.add_subcommand(
      "chain", "chain distances at one hop bound (pair or full matrix)");
  static std::string ch_space, ch_source, ch_target, ch_out;
  static double ch_eps = 0.0;
  static bool ch_constrained = false;
  chain->add_option("--space", ch_space)->required();
  chain->add_option("--eps", ch_eps, "hop bound")->required();
  chain->add_option("--source", ch_source, "landmark or #id");
  chain->add_option("--target", ch_target, "landmark or #id");
  chain->add_flag("--constrained", ch_constrained,
                  "keep only cut-respecting hops");
  chain->add_option("--out", ch_out, "matrix file (.dmx binary, .csv text)");
  chain->callback([&] {
    run = [] {
      return run_chain(ch_space, ch_eps, ch_source, ch_target, ch_constrained,
                       ch_out);
    };
  });

  // d0
  auto* d0 = app.add_subcommand(
      "d0", "chain distance along a decreasing hop-bound schedule");
  static std::string d0_space, d0_pair, d0_schedule;
  static double d0_rtol = 1e-2;
  d0->add_option("--space", d0_space)->required();
  d0->add_option("--pair", d0_pair, "two points: a,b")->required();
  d0->add_option("--schedule", d0_schedule, "hop bounds, decreasing: a,b,c")
      ->required();
  d0->add_option("--rtol", d0_rtol, "convergence tolerance");
  d0->callback([&] {
    run = [] { return run_d0(d0_space, d0_pair, d0_schedule, d0_rtol); };
  });

  // iterate
  auto* iter = app.add_subcommand(
      "iterate", "repeated chain-operator applications to the full metric");
  static std::string it_space, it_levels, it_pair;
  iter->add_option("--space", it_space)->required();
  iter->add_option("--levels", it_levels, "per-level hop bounds: e1,e2,e3")
      ->required();
  iter->add_option("--pair", it_pair, "two points: a,b")->required();
  iter->callback([&] {
    run = [] { return run_iterate(it_space, it_levels, it_pair); };
  });

  // length
  auto* len = app.add_subcommand("length", "polyline length from a path file");
  static std::string len_path;
  len->add_option("--path", len_path,
                  "JSON: {metric_kind, vertices} or {space, ids}")
      ->required();
  len->callback([&] { run = [] { return run_length(len_path); }; });

  // waypoints
  auto* wp = app.add_subcommand(
      "waypoints", "near-equispaced stops along a minimizing chain");
  static std::string wp_space, wp_pair;
  static double wp_eps = 0.0, wp_delta = 0.0;
  static bool wp_constrained = false;
  wp->add_option("--space", wp_space)->required();
  wp->add_option("--eps", wp_eps, "hop bound")->required();
  wp->add_option("--pair", wp_pair, "two points: a,b")->required();
  wp->add_option("--delta", wp_delta, "stop spacing")->required();
  wp->add_flag("--constrained", wp_constrained,
               "keep only cut-respecting hops");
  wp->callback([&] {
    run = [] {
      return run_waypoints(wp_space, wp_eps, wp_pair, wp_delta,
                           wp_constrained);
    };
  });

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run the built-in claim suite and report pass/fail");
  static std::string v_preset = "desk", v_out;
  verify->add_option("--preset", v_preset, "smoke, desk, or full")
      ->check(CLI::IsMember({"smoke", "desk", "full"}));
  verify->add_option("--out", v_out, "write the JSON report here");
  verify->callback([&] { run = [] { return run_verify(v_preset, v_out); }; });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "estimate over an (h, eps) grid, one CSV row per cell");
  static std::string sw_spec, sw_h, sw_eps, sw_from = "p", sw_to = "q",
                     sw_csv;
  static bool sw_constrained = false;
  sweep->add_option("--space-spec", sw_spec, "'generator key=value...'")
      ->required();
  sweep->add_option("--h-grid", sw_h, "sample spacings: a,b,c")->required();
  sweep->add_option("--eps-grid", sw_eps, "hop bounds: a,b,c (each >= 3h)")
      ->required();
  sweep->add_option("--from", sw_from, "source landmark");
  sweep->add_option("--to", sw_to, "target landmark");
  sweep->add_flag("--constrained", sw_constrained,
                  "keep only cut-respecting hops");
  sweep->add_option("--csv", sw_csv, "output CSV file")->required();
  sweep->callback([&] {
    run = [] {
      return run_sweep(sw_spec, sw_h, sw_eps, sw_from, sw_to, sw_constrained,
                       sw_csv);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run ? run() : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
