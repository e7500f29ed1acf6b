#include "stokes/problems.hpp"

#include <cmath>

namespace stokes {

DirichletData moffatt_lid_data() {
  return [](const Vec2& x, const Vec2& n) -> Vec2 {
    if (n.y() > 0.5 && std::abs(x.y()) < 1e-12) return {1.0 - x.x() * x.x(), 0.0};
    return Vec2::Zero();
  };
}

DirichletData tshape_inlet_data() {
  return [](const Vec2& x, const Vec2& n) -> Vec2 {
    if (std::abs(n.x()) > 0.5 && std::abs(std::abs(x.x()) - 1.5) < 1e-12)
      return {x.y() * (1.0 - x.y()), 0.0};
    return Vec2::Zero();
  };
}

Problem moffatt_problem() {
  return {"moffatt", gen_moffatt_wedge(), nullptr, moffatt_lid_data()};
}

Problem tshape_problem(int n_layers, double sigma) {
  return {"tshape", gen_tshape(n_layers, sigma), nullptr, tshape_inlet_data()};
}

}  // namespace stokes
