#include "parset/scene_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace parset {

using nlohmann::json;

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> keys,
                  const char* where) {
  for (const char* k : keys)
    if (!obj.contains(k))
      throw std::invalid_argument(std::string(where) + ": missing key \"" + k + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= it.key() == k;
    if (!known)
      throw std::invalid_argument(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

Point parse_vector(const json& j, const char* where) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(where) + ": expected an array of numbers");
  Point p;
  p.reserve(j.size());
  for (const auto& c : j) {
    if (!c.is_number())
      throw std::invalid_argument(std::string(where) + ": expected an array of numbers");
    p.push_back(c.get<double>());
  }
  return p;
}

ConvexBody parse_body(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("body: expected an object");
  if (!j.contains("type")) throw std::invalid_argument("body: missing key \"type\"");
  std::string type = j.at("type").get<std::string>();
  if (type == "ball") {
    require_keys(j, {"type", "radius"}, "body");
    return Ball{j.at("radius").get<double>()};
  }
  if (type == "hpolytope") {
    require_keys(j, {"type", "halfspaces"}, "body");
    HPolytope hp;
    for (const auto& hj : j.at("halfspaces")) {
      require_keys(hj, {"normal", "offset"}, "halfspace");
      Halfspace hs;
      hs.normal = parse_vector(hj.at("normal"), "halfspace normal");
      hs.offset = hj.at("offset").get<double>();
      hp.halfspaces.push_back(std::move(hs));
    }
    return hp;
  }
  if (type == "vpolytope") {
    require_keys(j, {"type", "vertices"}, "body");
    VPolytope vp;
    for (const auto& vj : j.at("vertices")) vp.vertices.push_back(parse_vector(vj, "vertex"));
    return vp;
  }
  throw std::invalid_argument("body: unknown type \"" + type + "\"");
}

const char* method_name(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::exact: return "exact";
    case VolumeMethod::monte_carlo: return "monte_carlo";
    case VolumeMethod::grid: return "grid";
  }
  return "?";
}

const char* body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::ball: return "ball";
    case BodyKind::cube: return "cube";
    case BodyKind::cross: return "cross";
  }
  return "?";
}

}  // namespace

Scene parse_scene_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scene JSON: parse error at byte " + std::to_string(e.byte) +
                                ": " + e.what());
  }
  return scene_from_json(j);
}

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scene JSON: expected an object");
  require_keys(j, {"dim", "points", "body", "r"}, "scene");
  if (!j.at("dim").is_number_integer())
    throw std::invalid_argument("scene: \"dim\" must be an integer");
  int dim = j.at("dim").get<int>();
  if (!j.at("points").is_array())
    throw std::invalid_argument("scene: \"points\" must be an array");
  std::vector<Point> pts;
  for (const auto& pj : j.at("points")) pts.push_back(parse_vector(pj, "point"));
  ConvexBody body = parse_body(j.at("body"));
  if (!j.at("r").is_number()) throw std::invalid_argument("scene: \"r\" must be a number");
  double r = j.at("r").get<double>();
  return Scene(PointCloud(dim, std::move(pts)), std::move(body), r);
}

json scene_to_json(const Scene& s) {
  json j;
  j["dim"] = s.cloud.dim;
  j["points"] = s.cloud.points;
  j["r"] = s.r;
  if (const auto* ball = std::get_if<Ball>(&s.body)) {
    j["body"] = {{"type", "ball"}, {"radius", ball->radius}};
  } else if (const auto* hp = std::get_if<HPolytope>(&s.body)) {
    json hs = json::array();
    for (const auto& h : hp->halfspaces)
      hs.push_back({{"normal", h.normal}, {"offset", h.offset}});
    j["body"] = {{"type", "hpolytope"}, {"halfspaces", std::move(hs)}};
  } else {
    j["body"] = {{"type", "vpolytope"},
                 {"vertices", std::get<VPolytope>(s.body).vertices}};
  }
  return j;
}

json to_json(const VolumeEstimate& est) {
  return {{"value", est.value},
          {"std_error", est.std_error},
          {"n_samples", est.n_samples},
          {"seed", est.seed},
          {"method", method_name(est.method)}};
}

json to_json(const ShellQuotient& q) {
  return {{"value", q.value}, {"std_error", q.std_error}};
}

json to_json(const SurfaceEstimate& est) {
  json ladder = json::array();
  for (std::size_t k = 0; k < est.eps_schedule.size(); ++k)
    ladder.push_back({{"eps", est.eps_schedule[k]},
                      {"value", est.raw_quotients[k].value},
                      {"std_error", est.raw_quotients[k].std_error}});
  return {{"eps_schedule", est.eps_schedule},
          {"raw_quotients", std::move(ladder)},
          {"extrapolated", est.extrapolated},
          {"extrapolated_error", est.extrapolated_error},
          {"max_two_smallest", est.max_two_smallest},
          {"n_samples", est.n_samples},
          {"seed", est.seed}};
}

json to_json(const GaussianEstimate& est) {
  return {{"value", est.value},
          {"std_error", est.std_error},
          {"n_samples", est.n_samples},
          {"seed", est.seed},
          {"method", est.method == GaussianMethod::direct_mc ? "direct_mc" : "radial"}};
}

json to_json(const BoundReport& rep) {
  return {{"d", rep.d},
          {"r", rep.r},
          {"explicit_bound", rep.explicit_bound},
          {"theorem_bound", rep.theorem_bound},
          {"jog_gaussian", rep.jog_gaussian},
          {"jog_lebesgue_factor", rep.jog_lebesgue_factor},
          {"r_star", rep.r_star},
          {"sum_term", rep.sum_term},
          {"regime", rep.regime == Regime::below_r_star ? "below_r_star" : "above_r_star"}};
}

json to_json(const ChainLedger& ledger) {
  json checks = json::array();
  for (const auto& c : ledger.checks)
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  return {{"checks", std::move(checks)}, {"all_pass", ledger.all_pass}};
}

json to_json(const SweepReport& rep) {
  json records = json::array();
  for (const auto& rec : rep.records) {
    json r = {{"index", rec.index},
              {"d", rec.d},
              {"r", rec.r},
              {"body", body_kind_name(rec.body)},
              {"cloud_size", rec.cloud_size},
              {"digest", hex64(rec.digest)},
              {"measured", rec.measured},
              {"ci", rec.ci},
              {"bound", rec.bound},
              {"margin_sigma", rec.margin_sigma},
              {"pass", rec.pass},
              {"skipped", rec.skipped},
              {"scene_seed", rec.scene_seed}};
    if (rec.explicit_margin_sigma) r["explicit_margin_sigma"] = *rec.explicit_margin_sigma;
    records.push_back(std::move(r));
  }
  return {{"kind", rep.kind},
          {"config",
           {{"dims", rep.config.dims},
            {"r_values", rep.config.r_values},
            {"n_scenes", rep.config.n_scenes},
            {"cloud_size_max", rep.config.cloud_size_max},
            {"n_samples", rep.config.n_samples},
            {"seed", rep.config.seed},
            {"tolerance_sigmas", rep.config.tolerance_sigmas},
            {"required_pass_rate", rep.config.required_pass_rate}}},
          {"records", std::move(records)},
          {"pass_rate", rep.pass_rate},
          {"n_skipped", rep.n_skipped},
          {"pass", rep.pass}};
}

json to_json(const MonotonicityReport& rep) {
  json est = json::array();
  for (const auto& row : rep.estimates) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    est.push_back(std::move(r));
  }
  json viols = json::array();
  for (const auto& v : rep.violations)
    viols.push_back({{"kind", v.kind}, {"i", v.i}, {"j", v.j}, {"delta", v.delta}, {"sigma", v.sigma}});
  json j = {{"s_grid", rep.s_grid},
            {"t_grid", rep.t_grid},
            {"estimates", std::move(est)},
            {"violations", std::move(viols)},
            {"pass", rep.pass}};
  if (rep.oracle) j["oracle"] = *rep.oracle;
  return j;
}

json to_json(const CertificateResult& res) {
  return {{"pass", res.pass},
          {"n_target", res.n_target},
          {"n_uncovered", res.n_uncovered},
          {"band", res.band},
          {"grid_shape", res.grid_shape},
          {"witnesses", res.witnesses}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string sweep_report_csv(const SweepReport& rep) {
  std::string out =
      "index,d,r,body,cloud_size,digest,measured,ci,bound,margin_sigma,"
      "explicit_margin_sigma,pass,skipped,scene_seed\n";
  for (const auto& rec : rep.records) {
    out += std::to_string(rec.index) + ',' + std::to_string(rec.d) + ',' +
           format_double(rec.r) + ',' + body_kind_name(rec.body) + ',' +
           std::to_string(rec.cloud_size) + ',' + hex64(rec.digest) + ',' +
           format_double(rec.measured) + ',' + format_double(rec.ci) + ',' +
           format_double(rec.bound) + ',' + format_double(rec.margin_sigma) + ',' +
           (rec.explicit_margin_sigma ? format_double(*rec.explicit_margin_sigma) : "") +
           ',' + (rec.pass ? "1" : "0") + ',' + (rec.skipped ? "1" : "0") + ',' +
           std::to_string(rec.scene_seed) + '\n';
  }
  return out;
}

std::string bound_table_csv(const std::vector<int>& dims,
                            const std::vector<double>& r_grid) {
  if (dims.empty() || r_grid.empty())
    throw std::invalid_argument("bound table: empty grid");
  std::string out = "d,r,explicit_bound,theorem_bound,jog_gaussian,r_star,regime\n";
  for (int d : dims) {
    for (double r : r_grid) {
      BoundReport rep = explicit_bound(d, r);
      out += std::to_string(d) + ',' + format_double(r) + ',' +
             format_double(rep.explicit_bound) + ',' + format_double(rep.theorem_bound) +
             ',' + format_double(rep.jog_gaussian) + ',' + format_double(rep.r_star) +
             ',' + (rep.regime == Regime::below_r_star ? "below_r_star" : "above_r_star") +
             '\n';
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace parset
