#include "eit/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "eit/errors.hpp"

namespace eit {

double CirclePhantom::operator()(Point p) const { return evaluate(*this, p); }

double CirclePhantom::max_value() const {
  double m = 0.0;
  for (const auto& c : circles) m = std::max(m, c.v);
  return m;
}

double evaluate(const CirclePhantom& phantom, Point p) {
  for (const auto& c : phantom.circles) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    if (dx * dx + dy * dy <= c.r * c.r) return c.v;
  }
  return 0.0;
}

bool is_admissible(const CirclePhantom& phantom) {
  const auto& cs = phantom.circles;
  for (size_t a = 0; a < cs.size(); ++a) {
    const double lim = 1.0 - cs[a].r - kContainmentMargin;
    if (std::abs(cs[a].x) > lim || std::abs(cs[a].y) > lim) return false;
    for (size_t b = a + 1; b < cs.size(); ++b) {
      if (std::hypot(cs[a].x - cs[b].x, cs[a].y - cs[b].y) <= cs[a].r + cs[b].r + kDisjointGap) {
        return false;
      }
    }
  }
  return true;
}

CirclePhantom sample_phantom(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(2, 3);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.15, 0.25);
  std::uniform_real_distribution<double> upper(1.0, 3.0);

  CirclePhantom ph;
  ph.seed = seed;
  const int k = count(rng);
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    ph.circles.clear();
    for (int c = 0; c < k; ++c) {
      Circle circle;
      circle.x = coord(rng);
      circle.y = coord(rng);
      circle.r = radius(rng);
      const double v_max = upper(rng);
      circle.v = std::uniform_real_distribution<double>(0.0, v_max)(rng);
      ph.circles.push_back(circle);
    }
    if (is_admissible(ph)) return ph;
  }
  throw SamplingBudgetError("sample_phantom: no admissible configuration after " +
                            std::to_string(kMaxSamplingAttempts) + " attempts (seed " +
                            std::to_string(seed) + ")");
}

CirclePhantom rescale_max(const CirclePhantom& phantom, double target) {
  if (!(target > 0.0)) throw ValidationError("rescale_max: target must be positive");
  const double vmax = phantom.max_value();
  if (!(vmax > 0.0)) throw ValidationError("rescale_max: phantom has no positive contrast");
  CirclePhantom out = phantom;
  const double scale = target / vmax;
  for (auto& c : out.circles) c.v = c.v == vmax ? target : c.v * scale;
  return out;
}

CirclePhantom standard_phantom() { return single_inclusion(0.0, 0.0); }

CirclePhantom single_inclusion(double x, double y, double r, double v) {
  CirclePhantom ph;
  ph.circles.push_back({x, y, r, v});
  return ph;
}

}  // namespace eit
