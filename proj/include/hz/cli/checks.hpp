#pragma once

#include <string>
#include <vector>

#include "hz/geom/classes.hpp"
#include "hz/geom/schottky.hpp"

namespace hz::cli {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured defect (or the quantity compared)
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

// A group together with what every check needs from it.
struct Fixture {
  std::string name;
  geom::GroupSpec spec;
  geom::SchottkyData group;
  geom::ClassTable table;
  double delta = 0.0;  // classical critical exponent from the determinant
  int order = 12;      // trace order N
  bool cylinder() const { return spec.cylinder.has_value(); }
};

// Builds the group and, unless `table` is given, its class table to n_max.
Fixture make_fixture(std::string name, const geom::GroupSpec& spec, int n_max, int order,
                     const geom::ClassTable* table = nullptr);

// Tolerances: the cylinder has closed forms and gets the tight ones.
std::vector<CheckResult> check_closed_form(const Fixture& fx);                     // 1
std::vector<CheckResult> check_overlap(const Fixture& fx, int points = 20);        // 2
std::vector<CheckResult> check_critical_exponent(const Fixture& fx);               // 3
std::vector<CheckResult> check_residues(const Fixture& fx, int count = 3, double radius = 0.08);  // 4
std::vector<CheckResult> check_kernel_difference(const Fixture& fx, const std::vector<double>& times,
                                                 double R = 6.0, double quad_tol = 1e-7);  // 5
std::vector<CheckResult> check_spectral(const Fixture& fx, const std::vector<double>& times);   // 6
std::vector<CheckResult> check_resolvent(const Fixture& fx, const std::vector<double>& lambdas);  // 7
std::vector<CheckResult> check_functional_equation(const Fixture& fx);             // 8

// Every check above that applies to the fixture, in criterion order.
std::vector<CheckResult> verify_all(const Fixture& fx);

}  // namespace hz::cli
