#include "tskam/io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace tskam {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(Error::Kind::Config, "cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw Error(Error::Kind::Config, "write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(Error::Kind::Config, "rename to " + path.string() + " failed: " + ec.message());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Error::Kind::Config, "cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path) {
    const std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Error::Kind::Config, path.string() + ": " + e.what());
    }
}

fs::path output_dir(const std::string& configured) {
    if (const char* env = std::getenv("TSKAM_OUTPUT_DIR"); env && *env) return env;
    return configured.empty() ? fs::path("out") : fs::path(configured);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!obj.is_object()) throw Error(Error::Kind::Config, path + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) throw Error(Error::Kind::Config, path + "." + k + ": unknown field");
}

double get_number(const json& obj, const char* key, const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw Error(Error::Kind::Config, path + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw Error(Error::Kind::Config, path + "." + key + ": not finite");
    return d;
}

double get_positive(const json& obj, const char* key, const std::string& path, double fallback) {
    const double d = get_number(obj, key, path, fallback);
    if (!(d > 0)) throw Error(Error::Kind::Config, path + "." + key + ": must be > 0");
    return d;
}

int get_int(const json& obj, const char* key, const std::string& path, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw Error(Error::Kind::Config, path + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw Error(Error::Kind::Config, path + "." + key + ": expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw Error(Error::Kind::Config, path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

MassParams masses_from_json(const json& obj, const std::string& path, const MassParams& fb) {
    reject_unknown(obj, {"m0", "m1", "m2", "mu"}, path);
    MassParams mp;
    mp.m0 = get_positive(obj, "m0", path, fb.m0);
    mp.m1 = get_positive(obj, "m1", path, fb.m1);
    mp.m2 = get_positive(obj, "m2", path, fb.m2);
    mp.mu = get_number(obj, "mu", path, fb.mu);
    if (mp.mu < 0) throw Error(Error::Kind::Config, path + ".mu: must be >= 0");
    return mp;
}

json to_json_value(const MassParams& mp) { return {{"m0", mp.m0}, {"m1", mp.m1}, {"m2", mp.m2}, {"mu", mp.mu}}; }

namespace {

const char* const kCart[] = {"y1", "y2", "x1", "x2"};
const char* const kJrd[] = {"Lambda1", "Lambda2", "Gamma1", "Gamma2", "G", "Z",
                            "ell1", "ell2", "gamma1", "gamma2", "gamma", "zeta"};
const char* const kRps[] = {"Lambda1", "Lambda2", "eta1", "eta2", "p", "Z",
                            "lambda1", "lambda2", "xi1", "xi2", "q", "zeta"};
const char* const kPer[] = {"Lambda1", "Lambda2", "Gamma2", "Theta", "G", "Z",
                            "ell1", "ell2", "g2", "vartheta", "g", "zeta"};

json phase_fields(const char* const* names, const Phase12& z) {
    json j;
    for (int k = 0; k < 12; ++k) j[names[k]] = z[k];
    return j;
}

Phase12 read_fields(const json& j, const char* const* names, const std::string& path) {
    Phase12 z;
    for (int k = 0; k < 12; ++k) {
        if (!j.contains(names[k])) throw Error(Error::Kind::Config, path + "." + names[k] + ": missing");
        z[k] = get_number(j, names[k], path, 0.0);
    }
    return z;
}

void check_keys(const json& j, const char* const* names, int n, const std::string& path) {
    std::set<std::string> ok{"chart"};
    for (int k = 0; k < n; ++k) ok.insert(names[k]);
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw Error(Error::Kind::Config, path + "." + k + ": unknown field");
}

}  // namespace

std::string chart_name(const ChartState& s) {
    static const char* const names[] = {"cartesian", "jrd", "rps", "perihelia"};
    return names[s.index()];
}

json state_to_json(const ChartState& s) {
    json j;
    j["chart"] = chart_name(s);
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CartesianState>) {
                const Vec3* v[] = {&c.y1, &c.y2, &c.x1, &c.x2};
                for (int k = 0; k < 4; ++k) j[kCart[k]] = {(*v[k])[0], (*v[k])[1], (*v[k])[2]};
            } else if constexpr (std::is_same_v<T, JrdCoords>) {
                j.update(phase_fields(kJrd, c.phase()));
            } else if constexpr (std::is_same_v<T, RpsCoords>) {
                j.update(phase_fields(kRps, c.phase()));
            } else {
                j.update(phase_fields(kPer, c.phase()));
            }
        },
        s);
    return j;
}

ChartState state_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw Error(Error::Kind::Config, path + ": expected an object");
    const std::string chart = get_string(j, "chart", path, "");
    if (chart == "cartesian") {
        check_keys(j, kCart, 4, path);
        CartesianState s;
        Vec3* v[] = {&s.y1, &s.y2, &s.x1, &s.x2};
        for (int k = 0; k < 4; ++k) {
            const std::string fp = path + "." + kCart[k];
            if (!j.contains(kCart[k]) || !j.at(kCart[k]).is_array() || j.at(kCart[k]).size() != 3)
                throw Error(Error::Kind::Config, fp + ": expected an array of 3 numbers");
            for (int i = 0; i < 3; ++i) {
                const auto& e = j.at(kCart[k])[i];
                if (!e.is_number()) throw Error(Error::Kind::Config, fp + ": expected numbers");
                (*v[k])[i] = e.get<double>();
            }
        }
        return s;
    }
    if (chart == "jrd") {
        check_keys(j, kJrd, 12, path);
        return JrdCoords::from_phase(read_fields(j, kJrd, path));
    }
    if (chart == "rps") {
        check_keys(j, kRps, 12, path);
        return RpsCoords::from_phase(read_fields(j, kRps, path));
    }
    if (chart == "perihelia") {
        check_keys(j, kPer, 12, path);
        return PeriheliaCoords::from_phase(read_fields(j, kPer, path));
    }
    throw Error(Error::Kind::Config, path + ".chart: expected cartesian | jrd | rps | perihelia");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tskam
