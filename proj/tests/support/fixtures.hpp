#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

#include "swucc/integrals.hpp"

#ifndef SWUCC_FIXTURE_DIR
#error "SWUCC_FIXTURE_DIR must be defined by the build"
#endif

namespace swucc::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(SWUCC_FIXTURE_DIR) + "/" + name;
}

inline nlohmann::json load_manifest() {
    std::ifstream in(fixture_path("manifest.json"));
    if (!in) throw std::runtime_error("missing fixture manifest");
    nlohmann::json doc;
    in >> doc;
    return doc;
}

inline IntegralStore load_fixture(const std::string& name) {
    return parse_fcidump_file(fixture_path(name + ".fcidump"));
}

}  // namespace swucc::testing
