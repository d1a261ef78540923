#pragma once

// Config loading, fail-closed field validation, chart-tagged state JSON, atomic output.

#include "tskam/kepler.hpp"

#include "json.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>
#include <variant>

namespace tskam {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// write-then-rename in the target directory; creates parent directories
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

// TSKAM_OUTPUT_DIR overrides the configured directory
std::filesystem::path output_dir(const std::string& configured);

// throws Config naming path + "." + key for any key outside `allowed`, or when obj is not an object
void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path);

// typed field access with the field path in the error message
double get_number(const json& obj, const char* key, const std::string& path, double fallback);
double get_positive(const json& obj, const char* key, const std::string& path, double fallback);
int get_int(const json& obj, const char* key, const std::string& path, int fallback);
std::string get_string(const json& obj, const char* key, const std::string& path, const std::string& fallback);
bool get_bool(const json& obj, const char* key, const std::string& path, bool fallback);

MassParams masses_from_json(const json& obj, const std::string& path, const MassParams& fallback = {});
json to_json_value(const MassParams& mp);

using ChartState = std::variant<CartesianState, JrdCoords, RpsCoords, PeriheliaCoords>;
// {"chart": "cartesian" | "jrd" | "rps" | "perihelia", <chart fields>}
json state_to_json(const ChartState& s);
ChartState state_from_json(const json& j, const std::string& path = "state");
std::string chart_name(const ChartState& s);

// shortest round-trip formatting, so re-runs give byte-identical files
std::string dump(const json& j);

}  // namespace tskam
