#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gridflex/grid_model.hpp"

namespace gridflex::testing {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline GridModel load_fixture(const std::string& name) {
    return load_network(slurp(fixture(name)));
}

// 2-bus network: slack B0 -- (r, x) -- B1.
inline std::string two_bus_json(double r = 0.01, double x = 0.02, double i_max = 2.0) {
    std::ostringstream os;
    os << R"({"units":"pu","s_base_mva":1.0,"buses":[)"
       << R"({"id":"B0","kind":"slack","base_kv":0.4,"v_min":0.9,"v_max":1.1},)"
       << R"({"id":"B1","kind":"pq","base_kv":0.4,"v_min":0.9,"v_max":1.1}],)"
       << R"("branches":[{"id":"b1","from_bus":"B0","to_bus":"B1","r":)" << r << R"(,"x":)" << x
       << R"(,"i_max":)" << i_max << "}]}";
    return os.str();
}

}  // namespace gridflex::testing
