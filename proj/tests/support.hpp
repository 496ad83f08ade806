#pragma once

#include "cukit/bratteli.hpp"

#include <string>

namespace cukit::test {

inline std::string fixture_path(const std::string& name) { return std::string(CUKIT_FIXTURE_DIR) + "/" + name; }

inline DiagramPtr fixture(const std::string& name) { return to_cu_diagram(load_bratteli(fixture_path(name + ".json"))); }

inline ExtNatVector v(std::initializer_list<ExtNat> xs) { return ExtNatVector(xs); }

inline const ExtNat kInf = ExtNat::inf();

}  // namespace cukit::test
