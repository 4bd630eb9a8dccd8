#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "jsbl/experiments.hpp"

namespace jsbl::experiments {

namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified (higher contrast) Shepp-Logan table.
constexpr std::array<Ellipse, 10> kEllipses{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

}  // namespace

Vector shepp_logan(Index n) {
  if (n < 16) throw Error(ErrorCode::InvalidArgument, "phantom needs n >= 16");
  Vector img = Vector::Zero(n * n);
  const double h = 2.0 / static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    const double x = -1.0 + (static_cast<double>(j) + 0.5) * h;
    for (Index i = 0; i < n; ++i) {
      const double y = 1.0 - (static_cast<double>(i) + 0.5) * h;
      double v = 0.0;
      for (const auto& e : kEllipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double w = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      img(i + n * j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace jsbl::experiments
