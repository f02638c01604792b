#include "hz/geom/group_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hz/error.hpp"
#include "json.hpp"

namespace hz::geom {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double real_from(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error(ErrorKind::InputError, what + ": expected a decimal string");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw Error(ErrorKind::InputError, what + ": cannot parse '" + s + "'");
  return out;
}

Interval interval_from(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::InputError, what + ": expected [lo, hi]");
  return {real_from(v[0], what), real_from(v[1], what)};
}

json real_to(double x) { return format_real(x); }

}  // namespace

GroupSpec parse_group_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, std::string("group file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::InputError, "group file must be a JSON object");

  GroupSpec spec;
  if (doc.contains("template") && !doc["template"].is_null()) {
    const json& t = doc["template"];
    const std::string kind = t.value("kind", "");
    if (kind == "cylinder") {
      spec.cylinder = CylinderTemplate{real_from(t.at("length"), "template.length")};
    } else if (kind == "symmetric") {
      SymmetricTemplate s;
      s.rank = t.value("rank", 2);
      s.spacing = real_from(t.at("spacing"), "template.spacing");
      s.half_width = real_from(t.at("half_width"), "template.half_width");
      spec.symmetric = s;
    } else {
      throw Error(ErrorKind::InputError, "unknown template kind '" + kind + "'");
    }
  }
  if (doc.contains("rank")) spec.rank = doc["rank"].get<int>();
  if (doc.contains("base_point")) {
    const json& b = doc["base_point"];
    if (!b.is_array() || b.size() != 2) throw Error(ErrorKind::InputError, "base_point: expected [re, im]");
    spec.base_point = cplx(real_from(b[0], "base_point"), real_from(b[1], "base_point"));
  }
  // Templates regenerate the explicit data; otherwise read it.
  if (!spec.cylinder && !spec.symmetric) {
    if (doc.contains("generators")) {
      for (const json& g : doc["generators"]) {
        if (!g.is_array() || g.size() != 4) throw Error(ErrorKind::InputError, "generator: expected [a, b, c, d]");
        spec.generators.push_back(
            {real_from(g[0], "generator"), real_from(g[1], "generator"), real_from(g[2], "generator"), real_from(g[3], "generator")});
      }
    }
    if (!doc.contains("intervals")) throw Error(ErrorKind::InputError, "group file needs 'intervals' or a 'template'");
    for (const json& p : doc["intervals"]) {
      spec.intervals.push_back({interval_from(p.at("plus"), "intervals.plus"), interval_from(p.at("minus"), "intervals.minus")});
    }
  }
  return spec;
}

GroupSpec load_group_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputError, "cannot open group file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_spec(ss.str());
}

std::string group_to_json(const SchottkyData& group, const GroupSpec* origin) {
  json doc;
  doc["rank"] = group.rank();
  json gens = json::array();
  for (const auto& g : group.generators()) gens.push_back({real_to(g.a), real_to(g.b), real_to(g.c), real_to(g.d)});
  doc["generators"] = gens;
  json ivs = json::array();
  for (const auto& p : group.intervals()) {
    ivs.push_back({{"plus", {real_to(p.plus.lo), real_to(p.plus.hi)}}, {"minus", {real_to(p.minus.lo), real_to(p.minus.hi)}}});
  }
  doc["intervals"] = ivs;
  doc["base_point"] = {real_to(group.base_point().real()), real_to(group.base_point().imag())};
  if (origin && origin->cylinder) {
    doc["template"] = {{"kind", "cylinder"}, {"length", real_to(origin->cylinder->length)}};
  } else if (origin && origin->symmetric) {
    doc["template"] = {{"kind", "symmetric"},
                       {"rank", origin->symmetric->rank},
                       {"spacing", real_to(origin->symmetric->spacing)},
                       {"half_width", real_to(origin->symmetric->half_width)}};
  }
  return doc.dump(2);
}

std::string content_hash(const SchottkyData& group) {
  std::ostringstream os;
  os << "rank=" << group.rank() << ';';
  for (const auto& g : group.generators()) {
    os << format_real(g.a) << ',' << format_real(g.b) << ',' << format_real(g.c) << ',' << format_real(g.d) << ';';
  }
  for (const auto& p : group.intervals()) {
    os << format_real(p.plus.lo) << ',' << format_real(p.plus.hi) << ',' << format_real(p.minus.lo) << ','
       << format_real(p.minus.hi) << ';';
  }
  os << format_real(group.base_point().real()) << ',' << format_real(group.base_point().imag());
  const std::string text = os.str();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hz::geom
