// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/densities.hpp"

#include <cmath>
#include <stdexcept>

namespace minmom {

namespace {
constexpr double kSigma = 0.5;
constexpr double kBeams1dA = 1e3;
constexpr double kBeams3dA = 100.0;
constexpr double kVacuumRho = 1e-8;
}  // namespace

TestDensity::TestDensity(Kind kind) : kind_(kind) {
  switch (kind_) {
    case Kind::Gauss1D:
      name_ = "gauss1d";
      geometry_ = Geometry::Slab;
      break;
    case Kind::Heaviside1D:
      name_ = "heaviside1d";
      geometry_ = Geometry::Slab;
      breakpoints_ = {0.0};
      break;
    case Kind::CrossingBeams1D:
      name_ = "crossingbeams1d";
      geometry_ = Geometry::Slab;
      break;
    case Kind::Gauss3D:
      name_ = "gauss3d";
      geometry_ = Geometry::Sphere;
      break;
    case Kind::Square3D:
      name_ = "square3d";
      geometry_ = Geometry::Sphere;
      break;
    case Kind::CrossingBeams3D:
      name_ = "crossingbeams3d";
      geometry_ = Geometry::Sphere;
      break;
  }
}

TestDensity TestDensity::gauss_1d() { return TestDensity(Kind::Gauss1D); }
TestDensity TestDensity::heaviside_1d() { return TestDensity(Kind::Heaviside1D); }
TestDensity TestDensity::crossing_beams_1d() { return TestDensity(Kind::CrossingBeams1D); }
TestDensity TestDensity::gauss_3d() { return TestDensity(Kind::Gauss3D); }
TestDensity TestDensity::square_3d() { return TestDensity(Kind::Square3D); }
TestDensity TestDensity::crossing_beams_3d() { return TestDensity(Kind::CrossingBeams3D); }

std::vector<std::string> TestDensity::names() {
  return {"gauss1d", "heaviside1d", "crossingbeams1d", "gauss3d", "square3d", "crossingbeams3d"};
}

TestDensity TestDensity::by_name(const std::string& name) {
  if (name == "gauss1d") return gauss_1d();
  if (name == "heaviside1d") return heaviside_1d();
  if (name == "crossingbeams1d") return crossing_beams_1d();
  if (name == "gauss3d") return gauss_3d();
  if (name == "square3d") return square_3d();
  if (name == "crossingbeams3d") return crossing_beams_3d();
  throw std::invalid_argument("unknown density: " + name);
}

double TestDensity::eval(double mu, double hint) const {
  switch (kind_) {
    case Kind::Gauss1D:
      return std::exp(-mu * mu / (2.0 * kSigma * kSigma)) /
             std::sqrt(2.0 * M_PI * kSigma * kSigma);
    case Kind::Heaviside1D:
      return hint < 0.0 ? kVacuumRho / 2.0 : 1.0;
    case Kind::CrossingBeams1D:
      return std::sqrt(kBeams1dA / M_PI) * (std::exp(-kBeams1dA * (mu + 1.0) * (mu + 1.0)) +
                                            std::exp(-kBeams1dA * (mu - 0.5) * (mu - 0.5)));
    default:
      throw std::logic_error("slab evaluation of a spherical density");
  }
}

double TestDensity::operator()(const Vec3& omega) const {
  switch (kind_) {
    case Kind::Gauss3D: {
      // On the sphere the squared distance to e_x is 2 - 2 Omega_x, so this
      // is exp(affine) and exactly a first-order ansatz.
      const double norm = 2.0 * M_PI * kSigma * kSigma *
                          (1.0 - std::exp(-2.0 / (kSigma * kSigma)));
      const Vec3 center(1.0, 0.0, 0.0);
      return std::exp(-(omega - center).squaredNorm() / (2.0 * kSigma * kSigma)) / norm;
    }
    case Kind::Square3D: {
      const bool inside = omega[0] > 0.0 && std::abs(omega[1]) < 0.5 && std::abs(omega[2]) < 0.5;
      return inside ? 1.0 : kVacuumRho / (4.0 * M_PI);
    }
    case Kind::CrossingBeams3D: {
      const Vec3 ex(1.0, 0.0, 0.0), ey(0.0, 1.0, 0.0);
      const double beams = kBeams3dA / M_PI *
                           (std::exp(-kBeams3dA * (omega - ex).squaredNorm()) +
                            std::exp(-kBeams3dA * (omega - ey).squaredNorm()));
      return std::max(beams, kVacuumRho / (4.0 * M_PI));
    }
    default:
      throw std::logic_error("spherical evaluation of a slab density");
  }
}

}  // namespace minmom
