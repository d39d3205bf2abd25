#include "ebc/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ebc {

double CoefficientExpr::value_at(double x, double y) const {
  switch (kind) {
    case CoefficientKind::constant:
      return base;
    case CoefficientKind::gaussian_bumps: {
      double v = base;
      for (const auto& b : bumps) {
        const double dx = x - b.center[0];
        const double dy = y - b.center[1];
        v += b.amplitude * std::exp(-b.decay * (dx * dx + dy * dy));
      }
      return v;
    }
    case CoefficientKind::sinusoidal:
      return base + amplitude *
                        std::sin(2.0 * std::numbers::pi * freq_x * x) *
                        std::sin(2.0 * std::numbers::pi * freq_y * y);
    case CoefficientKind::piecewise_smoothstep: {
      const double c = axis == 0 ? x : y;
      double t = (c - center) / width + 0.5;
      t = std::clamp(t, 0.0, 1.0);
      return base + amplitude * t * t * (3.0 - 2.0 * t);
    }
  }
  throw std::logic_error("CoefficientExpr: unknown kind");
}

std::string CoefficientExpr::describe() const {
  std::ostringstream os;
  switch (kind) {
    case CoefficientKind::constant:
      os << "constant(" << base << ")";
      break;
    case CoefficientKind::gaussian_bumps:
      os << "gaussian_bumps(base=" << base;
      for (const auto& b : bumps) {
        os << ", bump{amp=" << b.amplitude << ", center=(" << b.center[0] << ","
           << b.center[1] << "), decay=" << b.decay << "}";
      }
      os << ")";
      break;
    case CoefficientKind::sinusoidal:
      os << "sinusoidal(base=" << base << ", amp=" << amplitude
         << ", freq=(" << freq_x << "," << freq_y << "))";
      break;
    case CoefficientKind::piecewise_smoothstep:
      os << "piecewise_smoothstep(base=" << base << ", amp=" << amplitude
         << ", axis=" << (axis == 0 ? "x" : "y") << ", center=" << center
         << ", width=" << width << ")";
      break;
  }
  return os.str();
}

Coefficient evaluate(const CoefficientExpr& expr, const Mesh& mesh) {
  Coefficient c;
  c.per_element_values.resize(mesh.triangle_count());
  double lo = expr.declared_bounds[0];
  double hi = expr.declared_bounds[1];
  const bool declared = hi > lo;
  double measured_min = std::numeric_limits<double>::infinity();
  double measured_max = -measured_min;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double cx = (mesh.vertices[tri[0]][0] + mesh.vertices[tri[1]][0] +
                       mesh.vertices[tri[2]][0]) / 3.0;
    const double cy = (mesh.vertices[tri[0]][1] + mesh.vertices[tri[1]][1] +
                       mesh.vertices[tri[2]][1]) / 3.0;
    const double v = expr.value_at(cx, cy);
    if (v <= 0.0 || (declared && (v < lo || v > hi))) {
      std::ostringstream os;
      os << "coefficient out of bounds at element " << t << ": value " << v;
      throw std::invalid_argument(os.str());
    }
    c.per_element_values[t] = v;
    measured_min = std::min(measured_min, v);
    measured_max = std::max(measured_max, v);
  }
  c.lower_bound = measured_min;
  c.upper_bound = measured_max;
  return c;
}

Coefficient blend(const Coefficient& gamma0, const Coefficient& gamma1, double s) {
  if (gamma0.per_element_values.size() != gamma1.per_element_values.size()) {
    throw std::invalid_argument("blend: coefficients live on different meshes");
  }
  if (s < 0.0 || s > 1.0) {
    throw std::invalid_argument("blend: s must lie in [0,1]");
  }
  Coefficient c;
  c.per_element_values.resize(gamma0.per_element_values.size());
  for (std::size_t i = 0; i < c.per_element_values.size(); ++i) {
    c.per_element_values[i] =
        (1.0 - s) * gamma0.per_element_values[i] + s * gamma1.per_element_values[i];
  }
  c.lower_bound = (1.0 - s) * gamma0.lower_bound + s * gamma1.lower_bound;
  c.upper_bound = (1.0 - s) * gamma0.upper_bound + s * gamma1.upper_bound;
  return c;
}

}  // namespace ebc
