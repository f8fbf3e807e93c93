#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "fogweaver/scenario.hpp"

namespace fwtest {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string fixture(const std::string& name) { return std::string(FIXTURES) + "/" + name; }

inline fogweaver::Scenario uc1() { return fogweaver::parse_scenario(slurp(fixture("uc1.fog"))); }

}  // namespace fwtest
