#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "stokes/dofmap.hpp"
#include "stokes/mesh.hpp"
#include "stokes/refelem.hpp"

namespace stokes {

using SpMat = Eigen::SparseMatrix<double>;
using BodyForce = std::function<Vec2(const Vec2& x)>;
// Boundary data evaluated at a boundary point with the outward normal of the
// boundary edge being interpolated.
using DirichletData = std::function<Vec2(const Vec2& x, const Vec2& n)>;

// Element matrices in the element's global-function basis. Velocity local
// ordering is component-major: index c * nv + s.
struct ElementMatrices {
  Eigen::MatrixXd A;      // 2nv x 2nv, (grad u, grad v)
  Eigen::MatrixXd B;      // np x 2nv, -(div v, q)
  Eigen::VectorXd f;      // 2nv load
  Eigen::MatrixXd M;      // np x np pressure mass
};

ElementMatrices element_matrices(const Mesh& mesh, int K, const ReferenceBasisTable& table,
                                 const DofMap& dm, const BodyForce& f);

struct PartitionedSystem {
  const Mesh* mesh = nullptr;
  const DofMap* dofmap = nullptr;
  const ReferenceBasisTable* table = nullptr;
  std::vector<ElementMatrices> elems;
  Eigen::VectorXd g_constrained;  // values of the constrained velocity DOFs
};

PartitionedSystem assemble(const Mesh& mesh, const DofMap& dm, const ReferenceBasisTable& table,
                           const BodyForce& f, const DirichletData& g);

// Values of the constrained velocity DOFs (indexed from 0 = velocity dof nE).
Eigen::VectorXd interpolate_bc(const DirichletData& g, const Mesh& mesh, const DofMap& dm,
                               const ReferenceBasisTable& table);

// The full matrix over free DOFs in the order [u_E | p_e | u_I | p_iota] with
// the Dirichlet lifting moved to the right-hand side.
struct FullSystem {
  SpMat K;
  Eigen::VectorXd rhs;
  int nE = 0, ne = 0, nI = 0, ni = 0;
};
FullSystem assemble_full(const PartitionedSystem& sys);

// Position of a velocity / pressure DOF in the full ordering (-1 when constrained).
int full_index_velocity(const DofMap& dm, int v);
int full_index_pressure(const DofMap& dm, int p);

// Velocity DOF index of local element slot (component-major local index).
inline int local_velocity_global(const DofMap& dm, int K, int local, int nvs) {
  const int c = local / nvs, s = local % nvs;
  return dm.scalar_vel[dm.elem[K].vscalar[s]][c];
}

}  // namespace stokes
