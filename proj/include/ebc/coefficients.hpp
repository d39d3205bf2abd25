#pragma once

#include <array>
#include <string>
#include <vector>

#include "ebc/mesh.hpp"

namespace ebc {

/// Piecewise-constant diffusion coefficient, one positive value per triangle.
struct Coefficient {
  std::vector<double> per_element_values;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

enum class CoefficientKind { constant, gaussian_bumps, sinusoidal, piecewise_smoothstep };

struct GaussianBump {
  double amplitude = 0.0;
  std::array<double, 2> center{0.5, 0.5};
  double decay = 20.0;  // amplitude * exp(-decay * |x-center|^2)
};

/// Analytic coefficient family; sampled at triangle centroids.
struct CoefficientExpr {
  CoefficientKind kind = CoefficientKind::constant;
  double base = 1.0;
  std::vector<GaussianBump> bumps;                // gaussian_bumps
  double amplitude = 0.0;                         // sinusoidal / smoothstep
  double freq_x = 1.0, freq_y = 1.0;              // sinusoidal
  int axis = 0;                                   // smoothstep: 0 = x, 1 = y
  double center = 0.5, width = 0.1;               // smoothstep transition band
  std::array<double, 2> declared_bounds{0.0, 0.0};  // {0,0} = derive from params

  double value_at(double x, double y) const;
  std::string describe() const;
};

/// Sample at centroids, check positivity/bounds, tighten bounds to the
/// measured min/max.
Coefficient evaluate(const CoefficientExpr& expr, const Mesh& mesh);

/// gamma_s = (1-s) * gamma0 + s * gamma1, element-wise.
Coefficient blend(const Coefficient& gamma0, const Coefficient& gamma1, double s);

}  // namespace ebc
