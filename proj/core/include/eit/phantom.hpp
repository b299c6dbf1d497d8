#pragma once

#include <cstdint>
#include <vector>

#include "eit/grid.hpp"

namespace eit {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  double v = 0.0;  // contrast inside the closed disk
};

/// Piecewise-constant contrast made of disjoint disks.
struct CirclePhantom {
  std::vector<Circle> circles;
  std::uint64_t seed = 0;

  double operator()(Point p) const;
  double max_value() const;
};

inline constexpr double kContainmentMargin = 0.02;
inline constexpr double kDisjointGap = 0.01;
inline constexpr int kMaxSamplingAttempts = 10000;

/// Two or three disks: centers U(Omega), radii U(0.15, 0.25), V ~ U(1, 3),
/// v ~ U(0, V); redrawn until contained and disjoint.
CirclePhantom sample_phantom(std::uint64_t seed);

double evaluate(const CirclePhantom& phantom, Point p);

/// Scales every contrast by target / max_k v_k.
CirclePhantom rescale_max(const CirclePhantom& phantom, double target);

/// Disks lie inside [-1+margin, 1-margin]^2 and are separated by the gap.
bool is_admissible(const CirclePhantom& phantom);

/// Single disk of radius 0.2 and contrast 1 centered at the origin.
CirclePhantom standard_phantom();

/// Single disk of radius 0.2 and contrast 1 at (x, y).
CirclePhantom single_inclusion(double x, double y, double r = 0.2, double v = 1.0);

}  // namespace eit
