#pragma once

#include <string>
#include <vector>

#include "hz/conventions.hpp"

namespace hz::cli {

// Everything a subcommand reads. Serialises to JSON and back without loss,
// so a run can be replayed with --config.
struct RunConfig {
  std::string command;
  std::string group_path;

  // zeta-eval, l-gamma
  std::vector<cplx> lambdas;
  std::string method = "product";  // product | determinant
  std::string sigma = "trivial";   // trivial | sign

  // truncations
  int n_max = 12;  // class table word length
  int order = 12;  // trace order N of the determinant

  // zeta-zeros
  cplx rect_lo{-0.58, -1.0};
  cplx rect_hi{0.2, 1.0};
  int grid_re = 6;
  int grid_im = 6;
  double residue_radius = 0.08;

  // trace-compare, resolvent-t5
  std::vector<double> times{0.5, 1.0, 2.0};
  double R = 6.0;
  double radius_step = 1.0;
  double kernel_floor = 1e-15;
  double quad_tol = 1e-8;

  double tolerance = 1e-3;  // verification threshold for defects

  std::string cache_dir;  // empty: HZ_CACHE_DIR, then the user cache directory
  int threads = 0;
  std::string format = "json";  // json | csv
  std::string output;           // empty: stdout

  // Throws InputError naming the offending field.
  void validate() const;
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

}  // namespace hz::cli
