#pragma once

#include <filesystem>
#include <string>

#include "hz/geom/schottky.hpp"

namespace hz::geom {

// Group specification file (see docs/group-file.md). Reals are decimal
// strings; plain JSON numbers are accepted on input.
GroupSpec parse_group_spec(const std::string& json_text);
GroupSpec load_group_spec(const std::filesystem::path& path);

// Serialises a validated group with explicit generators and intervals
// (and the template it came from, when given).
std::string group_to_json(const SchottkyData& group, const GroupSpec* origin = nullptr);

// 64-bit FNV-1a over a canonical rendering of the generators, intervals and
// base point (17 significant digits), as 16 hex characters.
std::string content_hash(const SchottkyData& group);

std::string format_real(double x);

}  // namespace hz::geom
