#include "wtm/profile_json.hpp"

#include <fstream>
#include <stdexcept>

#include "wtm/error.hpp"

namespace wtm {

nlohmann::json profile_to_json(const RadialProfile& u) {
    return {{"radii", std::vector<double>(u.radii().begin(), u.radii().end())},
            {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

RadialProfile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("profile JSON must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "radii" && key != "values") throw ValidationError("unknown profile key '" + key + "'");
    if (!j.contains("radii") || !j.contains("values")) throw ValidationError("profile JSON needs 'radii' and 'values'");
    try {
        return RadialProfile(j.at("radii").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("profile arrays must hold numbers: ") + e.what());
    }
}

RadialProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("profile file " + path.string() + " is not valid JSON: " + e.what());
    }
    return profile_from_json(j);
}

void save_profile(const std::filesystem::path& path, const RadialProfile& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write profile file " + path.string());
    out << profile_to_json(u).dump(2) << '\n';
}

}  // namespace wtm
