#include "hz/cli/config.hpp"

#include <json.hpp>

#include "hz/error.hpp"

namespace hz::cli {

using nlohmann::json;

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InputError, what);
}

}  // namespace

void RunConfig::validate() const {
  require(n_max >= 1, "--n-max must be at least 1");
  require(order >= 1, "--order must be at least 1");
  require(method == "product" || method == "determinant", "--method must be product or determinant");
  require(sigma == "trivial" || sigma == "sign", "--sigma must be trivial or sign");
  require(format == "json" || format == "csv", "--format must be json or csv");
  require(grid_re >= 1 && grid_im >= 1, "--grid needs positive sizes");
  require(rect_hi.real() > rect_lo.real() && rect_hi.imag() > rect_lo.imag(), "--rect must have lo < hi in both parts");
  require(residue_radius > 0.0, "--residue-radius must be positive");
  require(!times.empty(), "--t needs at least one value");
  for (double t : times) require(t > 0.0, "--t values must be positive");
  require(R > 0.0 && radius_step > 0.0, "--R and --radius-step must be positive");
  require(kernel_floor > 0.0 && quad_tol > 0.0 && tolerance > 0.0, "tolerances must be positive");
  require(threads >= 0, "--threads must be non-negative");
}

std::string config_to_json(const RunConfig& c) {
  json lambdas = json::array();
  for (cplx z : c.lambdas) lambdas.push_back(complex_json(z));
  const json j = {
      {"command", c.command},
      {"group", c.group_path},
      {"lambdas", lambdas},
      {"method", c.method},
      {"sigma", c.sigma},
      {"n_max", c.n_max},
      {"order", c.order},
      {"rect_lo", complex_json(c.rect_lo)},
      {"rect_hi", complex_json(c.rect_hi)},
      {"grid", {c.grid_re, c.grid_im}},
      {"residue_radius", c.residue_radius},
      {"times", c.times},
      {"R", c.R},
      {"radius_step", c.radius_step},
      {"kernel_floor", c.kernel_floor},
      {"quad_tol", c.quad_tol},
      {"tolerance", c.tolerance},
      {"cache_dir", c.cache_dir},
      {"threads", c.threads},
      {"format", c.format},
      {"output", c.output},
  };
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    // Missing keys keep their defaults.
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    get("group", c.group_path);
    if (j.contains("lambdas")) {
      for (const auto& z : j.at("lambdas")) c.lambdas.push_back(complex_from(z));
    }
    get("method", c.method);
    get("sigma", c.sigma);
    get("n_max", c.n_max);
    get("order", c.order);
    if (j.contains("rect_lo")) c.rect_lo = complex_from(j.at("rect_lo"));
    if (j.contains("rect_hi")) c.rect_hi = complex_from(j.at("rect_hi"));
    if (j.contains("grid")) {
      c.grid_re = j.at("grid").at(0).get<int>();
      c.grid_im = j.at("grid").at(1).get<int>();
    }
    get("residue_radius", c.residue_radius);
    get("times", c.times);
    get("R", c.R);
    get("radius_step", c.radius_step);
    get("kernel_floor", c.kernel_floor);
    get("quad_tol", c.quad_tol);
    get("tolerance", c.tolerance);
    get("cache_dir", c.cache_dir);
    get("threads", c.threads);
    get("format", c.format);
    get("output", c.output);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

}  // namespace hz::cli
