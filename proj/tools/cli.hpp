#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace wtm::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kIoError = 2,       // unreadable or malformed input, unknown config keys
    kPrecondition = 3,  // parameters outside the admissible range
};

/// Configuration or input-file problem; maps to kIoError.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Default configuration of a subcommand. Every key a config file may set appears here.
nlohmann::json default_config(const std::string& command);

/// Overlays `overrides` onto `base`; throws ConfigError on keys absent from `base`.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides, const std::string& where = "");

/// Version line with build metadata.
std::string version_string();

/// Full command line entry point. Output goes to `out` unless --output names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wtm::cli
