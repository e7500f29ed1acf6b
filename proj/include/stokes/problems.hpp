#pragma once

#include <string>

#include "stokes/assembly.hpp"
#include "stokes/mesh.hpp"

namespace stokes {

// Mesh plus data of one of the benchmark flows.
struct Problem {
  std::string name;
  Mesh mesh;
  BodyForce f;
  DirichletData g;
};

// Lid profile (1 - x^2, 0) on y = 0, no slip elsewhere.
DirichletData moffatt_lid_data();
// Profile (y(1-y), 0) on x = -3/2 and x = 3/2, no slip elsewhere.
DirichletData tshape_inlet_data();

Problem moffatt_problem();
Problem tshape_problem(int n_layers, double sigma = 0.08);

}  // namespace stokes
