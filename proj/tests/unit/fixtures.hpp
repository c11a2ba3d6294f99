#pragma once

#include <string>

#include "gdirac/conditions.hpp"

namespace fixtures {

inline std::string path(const std::string& rel) { return std::string(GDIRAC_FIXTURES) + "/" + rel; }

inline gdirac::GraphDocument load(const std::string& rel) { return gdirac::load_graph(path(rel)); }

}  // namespace fixtures
