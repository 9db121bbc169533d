#pragma once

#include <filesystem>

#include "json.hpp"
#include "wtm/profile.hpp"

namespace wtm {

/// {"radii": [...], "values": [...]}; doubles are written in round-trip form.
nlohmann::json profile_to_json(const RadialProfile& u);

/// Throws ValidationError on missing keys, wrong types, unknown keys or invalid nodes.
RadialProfile profile_from_json(const nlohmann::json& j);

/// Throws std::runtime_error on I/O failure, ValidationError on malformed content.
RadialProfile load_profile(const std::filesystem::path& path);
void save_profile(const std::filesystem::path& path, const RadialProfile& u);

}  // namespace wtm
