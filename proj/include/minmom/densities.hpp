// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "minmom/geometry.hpp"

namespace minmom {

enum class Geometry { Slab, Sphere };

/// Prescribed kinetic densities used by the approximation studies. All are
/// strictly positive (discontinuous ones carry an isotropic vacuum floor).
/// Slab densities expose their jump locations so quadratures can split there;
/// evaluation takes an interior hint that picks the branch when a node sits
/// exactly on a jump.
class TestDensity {
 public:
  static TestDensity gauss_1d();           // N(0, 0.5^2), normalized on the line
  static TestDensity heaviside_1d();       // 1e-8/2 for mu < 0, 1 otherwise
  static TestDensity crossing_beams_1d();  // two narrow Gaussians, a = 1e3
  static TestDensity gauss_3d();           // exp(-|Omega - e_x|^2 / (2 0.5^2)), normalized
  static TestDensity square_3d();          // indicator with vacuum floor 1e-8/(4 pi)
  static TestDensity crossing_beams_3d();  // beams toward e_x and e_y, a = 100

  static TestDensity by_name(const std::string& name);
  static std::vector<std::string> names();

  const std::string& name() const { return name_; }
  Geometry geometry() const { return geometry_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  double operator()(double mu) const { return eval(mu, mu); }
  /// Slab evaluation with a branch hint for points on a jump: the value of
  /// the branch containing `hint` is returned.
  double eval(double mu, double hint) const;
  double operator()(const Vec3& omega) const;

 private:
  enum class Kind { Gauss1D, Heaviside1D, CrossingBeams1D, Gauss3D, Square3D, CrossingBeams3D };
  explicit TestDensity(Kind kind);

  Kind kind_;
  std::string name_;
  Geometry geometry_;
  std::vector<double> breakpoints_;
};

}  // namespace minmom
