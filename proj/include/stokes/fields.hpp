#pragma once

#include <vector>

#include "stokes/condense.hpp"

namespace stokes {

struct FieldSample {
  int elem = 0;
  double x = 0, y = 0;
  double u1 = 0, u2 = 0, p = 0;
  double div = 0;
};

// Velocity, pressure and velocity divergence at the reference quadrature
// points of every element.
std::vector<FieldSample> sample_fields(const PartitionedSystem& sys, const FullSolution& sol);

// |u_h|_{H^1} from the element stiffness matrices.
double h1_seminorm(const PartitionedSystem& sys, const Eigen::VectorXd& u);

// Element-local coefficient vectors (component-major velocity, pressure).
Eigen::VectorXd local_velocity(const PartitionedSystem& sys, int K, const Eigen::VectorXd& u);
Eigen::VectorXd local_pressure(const PartitionedSystem& sys, int K, const Eigen::VectorXd& p);

}  // namespace stokes
