#pragma once

#include "fpsi/block_system.hpp"

namespace fpsi {

/// Essential data for the three constrained fields. Empty functions mean zero.
struct DirichletData {
  VectorFunction uf;
  VectorFunction ur;
  VectorFunction ys;
};

/// Global indices and prescribed values of every constrained dof at time t.
struct Constraints {
  std::vector<int> dofs;  // ascending
  Eigen::VectorXd values;
};

Constraints dirichlet_constraints(const SpaceSet& spaces, const DirichletData& data, double t);

/// Symmetric elimination in place: b -= A[:, c] g, constrained rows and
/// columns zeroed (entries kept in the pattern), unit diagonal, b[c] = g.
/// A missing diagonal entry is inserted.
void eliminate(SparseMatrix& A, Eigen::VectorXd& b, const Constraints& c);

/// apply_dirichlet on an assembled system with its rhs.
void apply_dirichlet(BlockSystem& system, const SpaceSet& spaces, const DirichletData& data, double t);

}  // namespace fpsi
