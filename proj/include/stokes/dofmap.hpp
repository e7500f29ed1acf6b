#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "stokes/mesh.hpp"

namespace stokes {

enum class VelKind { C0Vertex, C1Vertex, Edge, Interior };
enum class PresKind { Vertex, Average, Interior };

// A global scalar velocity function; each one carries two velocity DOFs
// (one per Cartesian component).
struct ScalarDof {
  VelKind kind;
  int owner = -1;     // vertex, edge or element id
  int sub = 0;        // edge/interior degree index; direction slot at a vertex
  int dir_edge = -1;  // for corner C1 functions: the edge whose tangent is used
  Vec2 dir = Vec2::Zero();
  bool constrained = false;
};

struct VelocityDof {
  int scalar = -1;
  int comp = 0;
};

struct PressureDof {
  PresKind kind;
  int vertex = -1;
  int elem = -1;   // supporting element for corner vertex DOFs, owner otherwise
  int sub = 0;
};

struct ElementDofs {
  std::vector<int> vscalar;  // local scalar slot -> global scalar id
  // Global functions restricted to the element in terms of the reference
  // basis: row r = coefficients of slot r's global function.
  Eigen::MatrixXd C;
  std::vector<int> pdof;     // local pressure -> global pressure DOF
};

struct BlockRange {
  int start = 0, size = 0;
};

// Velocity numbering: [0, nE) free exterior in preconditioner order (C0
// vertex, C1 vertex pairs, interior edges), [nE, nE+nC) Dirichlet-constrained,
// then element-interior. Pressure numbering: [0, n_pvertex) vertex DOFs,
// [n_pvertex, ne) element averages, then element-interior.
struct DofMap {
  int k = 0;
  std::vector<ScalarDof> scalars;
  std::vector<std::array<int, 2>> scalar_vel;  // scalar -> velocity index per component
  std::vector<VelocityDof> vdofs;
  std::vector<PressureDof> pdofs;
  int nE = 0, nC = 0, nI = 0;
  int n_pvertex = 0, ne = 0, ni = 0;
  BlockRange c0_block;
  std::vector<BlockRange> c1_blocks;
  std::vector<BlockRange> edge_blocks;
  std::vector<ElementDofs> elem;
  std::vector<double> patch_area;  // |omega| per pressure vertex DOF

  int nvel() const { return nE + nC + nI; }
  int npres() const { return ne + ni; }
  std::vector<int> vertex_c0;                   // vertex -> C0 scalar
  std::vector<std::vector<int>> vertex_c1;      // vertex -> C1 scalars
  std::vector<std::vector<int>> vertex_pressure;  // vertex -> pressure vertex DOFs
};

// Throws ConfigurationError when the mesh is not corner-split.
DofMap build_dofmap(const Mesh& mesh, int k);

struct V0Mask {
  std::vector<bool> constrained;  // per global velocity DOF
};
V0Mask v0_mask(const DofMap& dm);

std::vector<double> patch_areas(const DofMap& dm, const Mesh& mesh);

}  // namespace stokes
