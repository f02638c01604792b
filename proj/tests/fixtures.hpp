#pragma once

#include <cmath>
#include <filesystem>
#include <random>

#include "hz/geom/group_io.hpp"
#include "hz/geom/schottky.hpp"

namespace hz::testing {

inline std::filesystem::path fixture_dir() { return HZ_FIXTURE_DIR; }

inline geom::SchottkyData cylinder(double length = 2.0) { return geom::build_schottky(geom::cylinder_spec(length)); }

inline geom::SchottkyData thin2() {
  return geom::build_schottky(geom::load_group_spec(fixture_dir() / "thin2.json"));
}

// Same template as thin2 with narrower intervals.
inline geom::SchottkyData thin2_shrunk() {
  auto spec = geom::load_group_spec(fixture_dir() / "thin2.json");
  spec.symmetric->half_width *= 0.75;
  return geom::build_schottky(spec);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace hz::testing
