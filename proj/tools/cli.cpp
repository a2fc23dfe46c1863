// Copyright 2026 The bilocal-sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bilocal/analysis.hpp"

#ifndef BILOCAL_VERSION
#define BILOCAL_VERSION "dev"
#endif

namespace bilocal::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;


struct GlobalOptions {
  std::string output_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string format = "csv";
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Collects output paths and writes the JSON summary that references them.
class Run {
 public:
  Run(std::string command, json parameters, const GlobalOptions& global)
      : command_(std::move(command)), parameters_(std::move(parameters)), global_(global) {
    fs::create_directories(global_.output_dir);
  }

  fs::path path(const std::string& name) const { return fs::path(global_.output_dir) / name; }

  void write_text(const std::string& name, const std::string& text) {
    const fs::path p = path(name);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    outputs_.push_back(p.string());
  }

  void write_summary(const std::string& name, json body) {
    const fs::path p = path(name);
    outputs_.push_back(p.string());
    body["manifest"] = {{"command", command_},
                        {"parameters", parameters_},
                        {"version", BILOCAL_VERSION},
                        {"timestamp", utc_timestamp()},
                        {"outputs", outputs_}};
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body.dump(2) << '\n';
  }

 private:
  std::string command_;
  json parameters_;
  const GlobalOptions& global_;
  std::vector<std::string> outputs_;
};

std::string fmt17(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

json interval_list(const std::vector<Interval>& windows) {
  json out = json::array();
  for (const Interval& w : windows) out.push_back({w.lo, w.hi});
  return out;
}

// Maximal runs of consecutive grid points satisfying `pred`.
template <typename Pred>
json grid_runs(const std::vector<SweepPoint>& points, Pred pred) {
  json out = json::array();
  std::optional<double> start;
  double last = 0.0;
  for (const SweepPoint& p : points) {
    if (pred(p)) {
      if (!start) start = p.G1;
      last = p.G1;
    } else if (start) {
      out.push_back({*start, last});
      start.reset();
    }
  }
  if (start) out.push_back({*start, last});
  return out;
}

template <typename Score>
json grid_peak(const std::vector<SweepPoint>& points, Score score) {
  if (points.empty()) return nullptr;
  auto best = std::max_element(points.begin(), points.end(), [&](const auto& a, const auto& b) {
    return score(a) < score(b);
  });
  return {{"G", best->G1}, {"value", score(*best)}};
}

std::string sweep_data(const std::vector<SweepPoint>& points, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const SweepPoint& p : points) arr.push_back(to_json(p));
    return arr.dump(2) + "\n";
  }
  std::ostringstream s;
  write_sweep_csv(s, points);
  return s.str();
}

double min_all(const SweepPoint& p) { return *std::min_element(p.B.begin(), p.B.end()); }
double min_11_22(const SweepPoint& p) { return std::min(p.b(1, 1), p.b(2, 2)); }

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item.size() != 2 || (item[0] != '1' && item[0] != '2') ||
        (item[1] != '1' && item[1] != '2')) {
      throw std::invalid_argument("pair '" + item + "' must be one of 11, 12, 21, 22");
    }
    pairs.emplace_back(item[0] - '0', item[1] - '0');
  }
  if (pairs.empty()) throw std::invalid_argument("no pairs given");
  return pairs;
}

ScenarioAngles parse_angles(const std::string& text) {
  std::vector<double> values;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) values.push_back(std::stod(item));
  if (values.size() == 4) {
    return ScenarioAngles::symmetric(values[0], values[1], values[2], values[3]);
  }
  if (values.size() == 8) {
    std::array<double, 8> flat;
    std::copy(values.begin(), values.end(), flat.begin());
    return ScenarioAngles::from_flat(flat);
  }
  throw std::invalid_argument("--angles needs 4 (symmetric) or 8 comma-separated values");
}

const std::vector<std::string> kPointerNames{"optimal", "square"};

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream s(spec);
  std::string item;
  while (std::getline(s, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("range '" + spec + "' is not start:stop:step");
    }
    if (used != item.size()) throw std::invalid_argument("range '" + spec + "' is malformed");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw std::invalid_argument("range '" + spec + "' is not start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("range needs step > 0 and start <= stop");
  }
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
  std::vector<double> grid;
  for (long k = 0; k <= count; ++k) {
    grid.push_back(std::min(start + k * step, std::max(stop, start)));
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network nonlocality sharing in the extended bilocal scenario", "bilocal"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--output-dir", global.output_dir, "Directory for output files");
  app.add_option("--jobs", global.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--format", global.format, "Data file format")
      ->check(CLI::IsMember({"csv", "json"}));

  // sweep
  std::string sw_p1 = "optimal", sw_p2 = "optimal", sw_range = "0:1:0.01", sw_mode = "passive",
              sw_name = "sweep";
  auto* sweep = app.add_subcommand("sweep", "BRGP values along G1 = G2 = G");
  sweep->add_option("--pointer1", sw_p1, "Alice_1 pointer")->check(CLI::IsMember(kPointerNames));
  sweep->add_option("--pointer2", sw_p2, "Charlie_1 pointer")->check(CLI::IsMember(kPointerNames));
  sweep->add_option("--g", sw_range, "G grid start:stop:step");
  sweep->add_option("--mode", sw_mode, "passive or active")
      ->check(CLI::IsMember({"passive", "active"}));
  sweep->add_option("--output", sw_name, "Output file stem");

  // verify
  int vf_trials = 100;
  double vf_tol = 1e-9;
  auto* verify = app.add_subcommand("verify", "Closed forms against the joint-table pipeline");
  verify->add_option("--trials", vf_trials)->check(CLI::PositiveNumber);
  verify->add_option("--tol", vf_tol)->check(CLI::NonNegativeNumber);

  // optimize
  std::string op_mode = "passive", op_p1, op_p2, op_pairs = "11,22", op_name = "optimize";
  double op_g = 0.8, op_v1 = 1.0, op_v2 = 1.0;
  std::optional<double> op_g1, op_g2;
  bool op_full = false;
  auto* optimize = app.add_subcommand("optimize", "Optimize measurement angles");
  optimize->add_option("--mode", op_mode)
      ->check(CLI::IsMember({"passive", "active", "max-min", "mixed-2d"}));
  optimize->add_option("--pointer1", op_p1)->check(CLI::IsMember(kPointerNames));
  optimize->add_option("--pointer2", op_p2)->check(CLI::IsMember(kPointerNames));
  optimize->add_option("--g", op_g, "G1 = G2 = G")->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--g1", op_g1)->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--g2", op_g2)->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--v1", op_v1)->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--v2", op_v2)->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--pairs", op_pairs, "Triples for max-min, e.g. 11,22");
  optimize->add_flag("--full-angles", op_full, "Refine all eight angles independently");
  optimize->add_option("--output", op_name);

  // noise
  std::string nz_pointer = "optimal", nz_name = "noise";
  std::optional<std::string> nz_p1, nz_p2;
  double nz_resolution = 1e-3;
  std::optional<double> nz_v1, nz_v2;
  auto* noise = app.add_subcommand("noise", "Critical visibility for double violation");
  noise->add_option("--pointer", nz_pointer, "Pointer for both wings")
      ->check(CLI::IsMember(kPointerNames));
  noise->add_option("--pointer1", nz_p1)->check(CLI::IsMember(kPointerNames));
  noise->add_option("--pointer2", nz_p2)->check(CLI::IsMember(kPointerNames));
  noise->add_option("--resolution", nz_resolution)->check(CLI::Range(1e-4, 1.0));
  noise->add_option("--v1", nz_v1)->check(CLI::Range(0.0, 1.0));
  noise->add_option("--v2", nz_v2)->check(CLI::Range(0.0, 1.0));
  noise->add_option("--output", nz_name);

  // table
  std::string tb_p1 = "optimal", tb_p2 = "optimal", tb_angles = "0.7853981633974483,"
              "0.7853981633974483,0.7853981633974483,0.7853981633974483", tb_name = "table";
  double tb_g1 = 0.8, tb_g2 = 0.8, tb_v1 = 1.0, tb_v2 = 1.0;
  auto* table = app.add_subcommand("table", "Joint outcome table for one configuration");
  table->add_option("--pointer1", tb_p1)->check(CLI::IsMember(kPointerNames));
  table->add_option("--pointer2", tb_p2)->check(CLI::IsMember(kPointerNames));
  table->add_option("--g1", tb_g1)->check(CLI::Range(0.0, 1.0));
  table->add_option("--g2", tb_g2)->check(CLI::Range(0.0, 1.0));
  table->add_option("--v1", tb_v1)->check(CLI::Range(0.0, 1.0));
  table->add_option("--v2", tb_v2)->check(CLI::Range(0.0, 1.0));
  table->add_option("--angles", tb_angles, "4 symmetric or 8 angles in radians");
  table->add_option("--output", tb_name);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  const std::string ext = global.format == "json" ? ".json" : ".csv";
  try {
    if (sweep->parsed()) {
      const std::vector<double> grid = parse_range(sw_range);
      for (double g : grid) {
        if (g < 0.0 || g > 1.0) throw std::invalid_argument("G grid must lie in [0, 1]");
      }
      const PointerModel m1 = parse_pointer_model(sw_p1);
      const PointerModel m2 = parse_pointer_model(sw_p2);
      const bool active = sw_mode == "active";
      if (active && (m1 != PointerModel::Optimal || m2 != PointerModel::Optimal)) {
        throw std::invalid_argument("active sweeps use optimal pointers on both wings");
      }
      Run run("sweep",
              {{"pointer1", sw_p1}, {"pointer2", sw_p2}, {"g", sw_range}, {"mode", sw_mode},
               {"format", global.format}, {"jobs", global.jobs}},
              global);
      const std::vector<SweepPoint> points =
          active ? active_sweep(grid, global.jobs) : passive_sweep(m1, m2, grid, global.jobs);
      run.write_text(sw_name + ext, sweep_data(points, global.format));

      json summary;
      summary["points"] = points.size();
      summary["double_violation_grid"] =
          grid_runs(points, [](const SweepPoint& p) { return p.double_violated(); });
      summary["max_simultaneous_b11_b22_grid"] = grid_peak(points, min_11_22);
      if (active) {
        summary["b11_gt_1_grid"] = grid_runs(points, [](const SweepPoint& p) { return p.b(1, 1) > 1.0; });
        summary["b22_gt_1_grid"] = grid_runs(points, [](const SweepPoint& p) { return p.b(2, 2) > 1.0; });
      } else {
        summary["quadruple_violation_grid"] =
            grid_runs(points, [](const SweepPoint& p) { return p.all_violated; });
        summary["peak_all_grid"] = grid_peak(points, min_all);
        summary["quadruple_window"] = interval_list(violation_windows(m1, m2, all_pairs()));
        summary["double_window"] = interval_list(violation_windows(m1, m2, first_and_last_pairs()));
        const ScalarMax peak_all = max_simultaneous(m1, m2, all_pairs());
        const ScalarMax peak_two = max_simultaneous(m1, m2, first_and_last_pairs());
        summary["peak_all"] = {{"G", peak_all.x}, {"value", peak_all.value}};
        summary["max_simultaneous_b11_b22"] = {{"G", peak_two.x}, {"value", peak_two.value}};
      }
      run.write_summary(sw_name + "_summary.json", summary);
      out << summary.dump(2) << '\n';
      return kSuccess;
    }

    if (verify->parsed()) {
      const VerifyReport report = verify_closed_forms(vf_trials, global.seed);
      const bool pass = report.max_deviation < vf_tol;
      json body{{"trials", report.trials},
                {"seed", global.seed},
                {"tolerance", vf_tol},
                {"max_deviation", report.max_deviation},
                {"pass", pass},
                {"worst",
                 {{"alice1", to_json(report.worst.alice1)},
                  {"charlie1", to_json(report.worst.charlie1)},
                  {"v1", report.worst.v1},
                  {"v2", report.worst.v2},
                  {"deviation", report.worst.deviation}}}};
      Run run("verify", {{"trials", vf_trials}, {"seed", global.seed}, {"tol", vf_tol}}, global);
      run.write_summary("verify_report.json", body);
      out << (pass ? "PASS" : "FAIL") << " trials=" << report.trials
          << " max_deviation=" << fmt17(report.max_deviation) << " tol=" << fmt17(vf_tol)
          << '\n';
      if (!pass) {
        err << "worst config: " << body["worst"].dump() << '\n';
        return kVerificationFailure;
      }
      return kSuccess;
    }

    if (optimize->parsed()) {
      const double g1 = op_g1.value_or(op_g);
      const double g2 = op_g2.value_or(op_g);
      json params{{"mode", op_mode}, {"g1", g1}, {"g2", g2},          {"v1", op_v1},
                  {"v2", op_v2},     {"full_angles", op_full}, {"pairs", op_pairs}};
      json body;
      if (op_mode == "mixed-2d") {
        const PointerModel m1 = parse_pointer_model(op_p1.empty() ? "square" : op_p1);
        const PointerModel m2 = parse_pointer_model(op_p2.empty() ? "optimal" : op_p2);
        params["pointer1"] = to_string(m1);
        params["pointer2"] = to_string(m2);
        const MixedOptimum best = optimize_pointer_pair(m1, m2);
        const ScalarMax equal = max_simultaneous(m1, m2, first_and_last_pairs());
        body = {{"G1", best.G1},
                {"G2", best.G2},
                {"value", best.value},
                {"pipeline_value", best.pipeline_value},
                {"angles",
                 {{"alice1", best.angles.alice[0].setting0},
                  {"alice2", best.angles.alice[1].setting0},
                  {"charlie1", best.angles.charlie[0].setting0},
                  {"charlie2", best.angles.charlie[1].setting0}}},
                {"equal_g", {{"G", equal.x}, {"value", equal.value}}}};
      } else {
        const PointerModel m1 = parse_pointer_model(op_p1.empty() ? "optimal" : op_p1);
        const PointerModel m2 = parse_pointer_model(op_p2.empty() ? "optimal" : op_p2);
        params["pointer1"] = to_string(m1);
        params["pointer2"] = to_string(m2);
        const ScenarioConfig base = make_config({m1, g1, 0.0}, {m2, g2, 0.0},
                                                ScenarioAngles::uniform(0.0), op_v1, op_v2);
        OptimizerOptions options;
        options.full_angles = op_full;
        const Objective objective = op_mode == "passive" ? Objective::passive()
                                    : op_mode == "active" ? Objective::active()
                                                          : Objective::max_min(parse_pairs(op_pairs));
        const OptimizationResult result = optimize_angles(base, objective, options);
        body = to_json(result);
        if (op_mode == "active" && m1 == PointerModel::Optimal && m2 == PointerModel::Optimal &&
            g1 == g2 && op_v1 == 1.0 && op_v2 == 1.0) {
          const ActiveSolution ref = closed_form_active(g1);
          body["closed_form_reference"] = {{"B11", ref.B11},
                                           {"B22", ref.B22},
                                           {"theta_first", ref.theta_first},
                                           {"theta_second", ref.theta_second},
                                           {"upper_branch", ref.upper_branch}};
        }
      }
      Run run("optimize", params, global);
      run.write_summary(op_name + ".json", body);
      out << body.dump(2) << '\n';
      return kSuccess;
    }

    if (noise->parsed()) {
      const PointerModel m1 = parse_pointer_model(nz_p1.value_or(nz_pointer));
      const PointerModel m2 = parse_pointer_model(nz_p2.value_or(nz_pointer));
      json params{{"pointer1", to_string(m1)}, {"pointer2", to_string(m2)},
                  {"resolution", nz_resolution}, {"format", global.format}};
      const NoiseResult result = noise_sweep(m1, m2, nz_resolution);
      json body{{"achievable", result.achievable},
                {"peak_noiseless", result.peak_noiseless},
                {"G_at_critical", result.G_at_critical},
                {"critical_visibility",
                 result.achievable ? json(result.critical_visibility) : json(nullptr)}};
      if (nz_v1 || nz_v2) {
        const double v1 = nz_v1.value_or(1.0), v2 = nz_v2.value_or(1.0);
        params["v1"] = v1;
        params["v2"] = v2;
        const double vis = std::sqrt(v1 * v2);
        body["visibility"] = vis;
        body["double_window"] =
            interval_list(violation_windows(m1, m2, first_and_last_pairs(), vis));
      }
      Run run("noise", params, global);
      if (global.format == "json") {
        json rows = json::array();
        for (const auto& r : result.boundary) {
          rows.push_back({{"V", r.V}, {"violated", r.violated}, {"G_low", r.G_low},
                          {"G_high", r.G_high}});
        }
        run.write_text(nz_name + "_boundary.json", rows.dump(2) + "\n");
      } else {
        std::ostringstream csv;
        csv << std::setprecision(17) << "V,violated,G_low,G_high\n";
        for (const auto& r : result.boundary) {
          csv << r.V << ',' << (r.violated ? 1 : 0) << ',' << r.G_low << ',' << r.G_high << '\n';
        }
        run.write_text(nz_name + "_boundary.csv", csv.str());
      }
      run.write_summary(nz_name + "_summary.json", body);
      out << body.dump(2) << '\n';
      return kSuccess;
    }

    if (table->parsed()) {
      const ScenarioConfig config =
          make_config({parse_pointer_model(tb_p1), tb_g1, 0.0},
                      {parse_pointer_model(tb_p2), tb_g2, 0.0}, parse_angles(tb_angles), tb_v1, tb_v2);
      const JointTable t = joint_table(config);
      Run run("table",
              {{"pointer1", tb_p1}, {"pointer2", tb_p2}, {"g1", tb_g1}, {"g2", tb_g2},
               {"v1", tb_v1}, {"v2", tb_v2}, {"angles", tb_angles}, {"format", global.format}},
              global);
      if (global.format == "json") {
        run.write_text(tb_name + ".json", to_json(t).dump(2) + "\n");
      } else {
        std::ostringstream csv;
        write_csv(csv, t);
        run.write_text(tb_name + ".csv", csv.str());
      }
      json brgp = json::array();
      for (const BrgpResult& r : brgp_all(t).results) brgp.push_back(to_json(r));
      run.write_summary(tb_name + "_summary.json", {{"brgp", brgp}});
      out << brgp.dump(2) << '\n';
      return kSuccess;
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace bilocal::cli
