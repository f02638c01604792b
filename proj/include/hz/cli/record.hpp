#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hz::cli {

inline constexpr int kSchemaVersion = 1;

using Field = std::variant<double, long long, bool, std::string>;
using Fields = std::vector<std::pair<std::string, Field>>;

// One output row. Inputs and outputs keep their insertion order, which is
// also the CSV column order.
struct ResultRecord {
  std::string command;
  std::string group_hash;
  Fields inputs;
  Fields outputs;
  double wall_time = 0.0;  // seconds; the only field allowed to differ between runs
};

// Reals are written with 17 significant digits; non-finite reals as null.
std::string format_double(double x);

// Appends records to one stream. JSON: one object per line. CSV: a header of
// group_hash plus the output names before the first record, and again
// whenever the set of columns changes.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}
  void write(const ResultRecord& record);

 private:
  std::ostream& out_;
  std::string format_;
  std::vector<std::string> header_;
};

std::string to_json_line(const ResultRecord& record);

}  // namespace hz::cli
