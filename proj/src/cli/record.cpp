#include "hz/cli/record.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace hz::cli {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string render(const Field& f) {
  if (const auto* d = std::get_if<double>(&f)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&f)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&f)) return *b ? "true" : "false";
  return quoted(std::get<std::string>(f));
}

std::string render_csv(const Field& f) {
  if (const auto* s = std::get_if<std::string>(&f)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string out = "\"";
    for (char c : *s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  }
  if (const auto* d = std::get_if<double>(&f)) return std::isfinite(*d) ? format_double(*d) : "";
  return render(f);
}

std::string object(const Fields& fields) {
  std::string out = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += quoted(fields[i].first) + ":" + render(fields[i].second);
  }
  return out + "}";
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json_line(const ResultRecord& r) {
  return "{\"schema\":" + std::to_string(kSchemaVersion) + ",\"command\":" + quoted(r.command) +
         ",\"group_hash\":" + quoted(r.group_hash) + ",\"inputs\":" + object(r.inputs) +
         ",\"outputs\":" + object(r.outputs) + ",\"wall_time\":" + format_double(r.wall_time) + "}";
}

void RecordWriter::write(const ResultRecord& r) {
  if (format_ == "json") {
    out_ << to_json_line(r) << '\n';
    out_.flush();
    return;
  }
  std::vector<std::string> header{"group_hash"};
  for (const auto& [name, value] : r.outputs) header.push_back(name);
  if (header != header_) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
    header_ = std::move(header);
  }
  out_ << r.group_hash;
  for (const auto& [name, value] : r.outputs) out_ << ',' << render_csv(value);
  out_ << '\n';
  out_.flush();
}

}  // namespace hz::cli
