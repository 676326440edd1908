#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parset/verify.hpp"

namespace parset {

// Strict scene reader for the documented format:
//   {"dim": d, "points": [[...], ...], "body": {...}, "r": r}
// with body one of
//   {"type": "ball", "radius": rho}
//   {"type": "hpolytope", "halfspaces": [{"normal": [...], "offset": b}, ...]}
//   {"type": "vpolytope", "vertices": [[...], ...]}
// Unknown keys are rejected by name; malformed JSON reports the byte offset.
Scene parse_scene_json(const std::string& text);
Scene scene_from_json(const nlohmann::json& j);

nlohmann::json scene_to_json(const Scene& s);
nlohmann::json to_json(const VolumeEstimate& est);
nlohmann::json to_json(const ShellQuotient& q);
nlohmann::json to_json(const SurfaceEstimate& est);
nlohmann::json to_json(const GaussianEstimate& est);
nlohmann::json to_json(const BoundReport& rep);
nlohmann::json to_json(const ChainLedger& ledger);
nlohmann::json to_json(const SweepReport& rep);
nlohmann::json to_json(const MonotonicityReport& rep);
nlohmann::json to_json(const CertificateResult& res);

// One row per scene, 17-significant-digit doubles, '.' decimal separator.
std::string sweep_report_csv(const SweepReport& rep);

// Header: d,r,explicit_bound,theorem_bound,jog_gaussian,r_star,regime
std::string bound_table_csv(const std::vector<int>& dims,
                            const std::vector<double>& r_grid);

std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace parset
