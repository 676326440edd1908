#include "parset/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "parset/scene_io.hpp"

namespace parset {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Emitter {
  std::ostream& out;
  std::ostream& err;
  std::string out_path;  // empty = stdout
  json manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit_primary(const std::string& text) {
    json record = {{"path", out_path.empty() ? "-" : out_path},
                   {"bytes", text.size()},
                   {"fnv1a64", hex64(fnv1a64(text))}};
    manifest["outputs"].push_back(std::move(record));
    if (out_path.empty()) {
      out << text;
      if (text.empty() || text.back() != '\n') out << '\n';
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::invalid_argument("cannot write file: " + out_path);
      f << text;
    }
  }

  void finish() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    manifest["duration_ms"] = ms;
    manifest["version"] = kVersion;
    err << manifest.dump() << '\n';
  }
};

// --- strict config readers --------------------------------------------------

json parse_config(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config JSON: parse error at byte " +
                                std::to_string(e.byte) + ": " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= it.key() == k;
    if (!known)
      throw std::invalid_argument(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

SweepConfig parse_sweep_config(const json& j, int workers) {
  reject_unknown(j,
                 {"dims", "r_values", "n_scenes", "cloud_size_max", "n_samples", "seed",
                  "tolerance_sigmas", "required_pass_rate"},
                 "sweep config");
  SweepConfig cfg;
  cfg.dims = j.at("dims").get<std::vector<int>>();
  cfg.r_values = j.at("r_values").get<std::vector<double>>();
  cfg.n_scenes = j.at("n_scenes").get<int>();
  cfg.cloud_size_max = j.value("cloud_size_max", 8);
  cfg.n_samples = j.at("n_samples").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::int64_t>();
  cfg.tolerance_sigmas = j.value("tolerance_sigmas", 3.0);
  cfg.required_pass_rate = j.value("required_pass_rate", 0.99);
  cfg.workers = workers;
  return cfg;
}

RegionOracle parse_region(const json& j, const Box& window) {
  if (!j.contains("type")) throw std::invalid_argument("region: missing key \"type\"");
  std::string type = j.at("type").get<std::string>();
  RegionOracle oracle;
  oracle.window = window;
  if (type == "halfspace_ge") {
    reject_unknown(j, {"type", "normal", "offset"}, "region");
    Point n = j.at("normal").get<Point>();
    double c = j.at("offset").get<double>();
    oracle.description = "halfspace_ge";
    oracle.member = [n, c](std::span<const double> x) { return dot(n, x) >= c; };
    return oracle;
  }
  if (type == "box" || type == "box_complement") {
    reject_unknown(j, {"type", "lo", "hi"}, "region");
    Point lo = j.at("lo").get<Point>(), hi = j.at("hi").get<Point>();
    bool complement = type == "box_complement";
    oracle.description = type;
    oracle.member = [lo, hi, complement](std::span<const double> x) {
      bool interior = true;
      for (std::size_t i = 0; i < lo.size(); ++i)
        interior = interior && x[i] > lo[i] && x[i] < hi[i];
      bool closed = true;
      for (std::size_t i = 0; i < lo.size(); ++i)
        closed = closed && x[i] >= lo[i] && x[i] <= hi[i];
      return complement ? !interior : closed;
    };
    return oracle;
  }
  if (type == "scene_image") {
    reject_unknown(j, {"type", "scene"}, "region");
    Scene s = scene_from_json(j.at("scene"));
    oracle.description = "scene_image";
    oracle.member = [s](std::span<const double> x) { return contains(s, x); };
    return oracle;
  }
  throw std::invalid_argument("region: unknown type \"" + type + "\"");
}

// --- subcommand bodies -------------------------------------------------------

int run_verify(const std::string& which, const std::string& config_path,
               const std::string& csv_path, int workers, Emitter& em) {
  json cfg = parse_config(config_path);

  if (which == "thm1" || which == "thm2") {
    SweepConfig sc = parse_sweep_config(cfg, workers);
    SweepReport report = which == "thm1" ? thm1_sweep(sc) : thm2_sweep(sc);
    if (!csv_path.empty()) {
      std::ofstream f(csv_path, std::ios::binary);
      if (!f) throw std::invalid_argument("cannot write file: " + csv_path);
      std::string csv = sweep_report_csv(report);
      f << csv;
      em.manifest["outputs"].push_back(
          {{"path", csv_path}, {"bytes", csv.size()}, {"fnv1a64", hex64(fnv1a64(csv))}});
    }
    em.emit_primary(to_json(report).dump(2));
    return report.pass ? kExitOk : kExitVerifyFail;
  }

  if (which == "monotonicity") {
    reject_unknown(cfg,
                   {"dim", "cloud", "body", "s_grid", "t_grid", "n_samples", "seed",
                    "tolerance_sigmas"},
                   "monotonicity config");
    int dim = cfg.at("dim").get<int>();
    PointCloud cloud(dim, cfg.at("cloud").get<std::vector<Point>>());
    json body_json = {{"dim", dim},
                      {"points", json::array({json::array()})},
                      {"body", cfg.at("body")},
                      {"r", 1.0}};
    // reuse the scene body parser via a throwaway single-point scene
    body_json["points"] = json::array({std::vector<double>(dim, 0.0)});
    Scene tmp = scene_from_json(body_json);
    auto report = monotonicity_check(cloud, tmp.body, cfg.at("s_grid").get<std::vector<double>>(),
                                     cfg.at("t_grid").get<std::vector<double>>(),
                                     cfg.at("n_samples").get<std::uint64_t>(),
                                     cfg.at("seed").get<std::int64_t>(),
                                     cfg.value("tolerance_sigmas", 4.0));
    em.emit_primary(to_json(report).dump(2));
    return report.pass ? kExitOk : kExitVerifyFail;
  }

  if (which == "rparallel") {
    reject_unknown(cfg, {"region", "window", "r", "h"}, "rparallel config");
    const json& wj = cfg.at("window");
    reject_unknown(wj, {"lo", "hi"}, "window");
    Box window{wj.at("lo").get<Point>(), wj.at("hi").get<Point>()};
    RegionOracle region = parse_region(cfg.at("region"), window);
    auto result = r_parallel_certificate(region, cfg.at("r").get<double>(),
                                         cfg.at("h").get<double>());
    em.emit_primary(to_json(result).dump(2));
    return result.pass ? kExitOk : kExitVerifyFail;
  }

  throw CLI::ValidationError("verify", "unknown sub-command \"" + which + "\"");
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"parallel-set measure toolkit"};
  app.require_subcommand(1);

  std::string scene_path, out_path, config_path, csv_path, which;
  std::uint64_t n = 0;
  std::int64_t seed = 0;
  double eps0 = 0.0;
  int levels = 5, workers = 1;
  std::vector<int> dims;
  double r_min = 0.0, r_max = 0.0;
  int r_count = 0;
  std::string r_scale = "log";

  auto add_common = [&](CLI::App* cmd, bool needs_eps) {
    cmd->add_option("--scene", scene_path, "scene JSON file")->required();
    cmd->add_option("--n", n, "sample count")->required();
    cmd->add_option("--seed", seed, "RNG seed (required: runs must be reproducible)")
        ->required();
    if (needs_eps) {
      cmd->add_option("--eps0", eps0, "largest shell width (default r/10)");
      cmd->add_option("--levels", levels, "number of geometric shell levels")->capture_default_str();
    }
    cmd->add_option("--workers", workers, "worker threads (never affects results)")->capture_default_str();
    cmd->add_option("--out", out_path, "write primary output to a file");
  };

  CLI::App* volume = app.add_subcommand("volume", "Monte Carlo volume of a scene");
  add_common(volume, false);

  CLI::App* surface = app.add_subcommand("surface", "outer surface content of a scene");
  add_common(surface, true);

  CLI::App* gsurface =
      app.add_subcommand("gauss-surface", "Gaussian surface content of a scene");
  add_common(gsurface, true);

  CLI::App* verify = app.add_subcommand("verify", "theorem harnesses");
  verify->add_option("which", which, "one of thm1, thm2, monotonicity, rparallel")
      ->required();
  verify->add_option("--config", config_path, "config JSON file")->required();
  verify->add_option("--csv", csv_path, "also write a per-scene CSV (sweeps)");
  verify->add_option("--workers", workers, "worker threads")->capture_default_str();
  verify->add_option("--out", out_path, "write primary output to a file");

  CLI::App* table = app.add_subcommand("bound-table", "Gaussian bound comparison table");
  table->add_option("--dims", dims, "dimensions, comma separated")
      ->required()
      ->delimiter(',');
  table->add_option("--r-min", r_min, "smallest r")->required();
  table->add_option("--r-max", r_max, "largest r")->required();
  table->add_option("--r-count", r_count, "grid size")->required();
  table->add_option("--r-scale", r_scale, "log or lin")->capture_default_str();
  table->add_option("--out", out_path, "write primary output to a file");

  std::vector<const char*> argv;
  argv.push_back("parset");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Emitter em{out, err, out_path, json::object()};
  em.manifest["outputs"] = json::array();

  try {
    if (app.got_subcommand(volume)) {
      if (n == 0) throw CLI::ValidationError("--n", "must be >= 1");
      em.manifest["command"] = "volume";
      em.manifest["parameters"] = {{"scene", scene_path}, {"n", n}, {"workers", workers}};
      em.manifest["seed"] = seed;
      Scene s = parse_scene_json(read_file(scene_path));
      auto est = mc_volume(s, n, seed, workers);
      em.emit_primary(to_json(est).dump(2));
      em.finish();
      return kExitOk;
    }

    if (app.got_subcommand(surface) || app.got_subcommand(gsurface)) {
      bool gauss = app.got_subcommand(gsurface);
      if (n == 0) throw CLI::ValidationError("--n", "must be >= 1");
      if (levels < 2) throw CLI::ValidationError("--levels", "extrapolation needs >= 2");
      em.manifest["command"] = gauss ? "gauss-surface" : "surface";
      em.manifest["parameters"] = {{"scene", scene_path},
                                   {"n", n},
                                   {"eps0", eps0},
                                   {"levels", levels},
                                   {"workers", workers}};
      em.manifest["seed"] = seed;
      Scene s = parse_scene_json(read_file(scene_path));
      auto schedule = default_eps_schedule(s.r, eps0, levels);
      SurfaceEstimate est = gauss ? gaussian_surface_fd(s, schedule, n, seed, workers)
                                  : outer_content(s, schedule, n, seed, workers);
      em.emit_primary(to_json(est).dump(2));
      em.finish();
      return kExitOk;
    }

    if (app.got_subcommand(verify)) {
      em.manifest["command"] = "verify";
      em.manifest["parameters"] = {{"which", which},
                                   {"config", config_path},
                                   {"csv", csv_path},
                                   {"workers", workers}};
      int code = run_verify(which, config_path, csv_path, workers, em);
      em.finish();
      return code;
    }

    if (app.got_subcommand(table)) {
      if (dims.empty() || r_count < 1)
        throw CLI::ValidationError("bound-table", "empty grid");
      if (!(r_min > 0.0) || !(r_max >= r_min))
        throw CLI::ValidationError("bound-table", "need 0 < r-min <= r-max");
      em.manifest["command"] = "bound-table";
      em.manifest["parameters"] = {{"dims", dims},
                                   {"r_min", r_min},
                                   {"r_max", r_max},
                                   {"r_count", r_count},
                                   {"r_scale", r_scale}};
      std::vector<double> grid;
      for (int k = 0; k < r_count; ++k) {
        double f = r_count == 1 ? 0.0 : static_cast<double>(k) / (r_count - 1);
        grid.push_back(r_scale == "lin"
                           ? r_min + f * (r_max - r_min)
                           : std::exp(std::log(r_min) + f * (std::log(r_max) - std::log(r_min))));
      }
      em.emit_primary(bound_table_csv(dims, grid));
      em.finish();
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFail;
  }
  return kExitUsage;
}

}  // namespace parset
