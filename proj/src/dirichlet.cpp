#include "fpsi/dirichlet.hpp"

#include <algorithm>

namespace fpsi {

Constraints dirichlet_constraints(const SpaceSet& spaces, const DirichletData& data, double t) {
  const BlockLayout layout = BlockLayout::from(spaces);
  std::vector<std::pair<int, double>> entries;
  auto collect = [&](Field f, const VectorFunction& g) {
    const FunctionSpace& s = spaces[f];
    for (int n : s.dirichlet_nodes()) {
      const Vec2 v = g ? g(s.node_point(n), t) : Vec2::Zero().eval();
      for (int c = 0; c < 2; ++c) entries.emplace_back(layout.offset(f) + s.dof(n, c), v[c]);
    }
  };
  collect(Field::Uf, data.uf);
  collect(Field::Ur, data.ur);
  collect(Field::Ys, data.ys);
  std::sort(entries.begin(), entries.end());
  Constraints c;
  c.values.resize(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    c.dofs.push_back(entries[i].first);
    c.values[static_cast<Eigen::Index>(i)] = entries[i].second;
  }
  return c;
}

void eliminate(SparseMatrix& A, Eigen::VectorXd& b, const Constraints& c) {
  const Eigen::Index n = A.rows();
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> missing_diagonal;
  for (std::size_t i = 0; i < c.dofs.size(); ++i) slot[static_cast<std::size_t>(c.dofs[i])] = static_cast<int>(i);
  for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
    const int sr = slot[static_cast<std::size_t>(r)];
    bool diagonal = false;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
      const int sc = slot[static_cast<std::size_t>(it.col())];
      if (sr >= 0) {
        if (it.col() == r) {
          it.valueRef() = 1.0;
          diagonal = true;
        } else {
          it.valueRef() = 0.0;
        }
      } else if (sc >= 0) {
        b[r] -= it.value() * c.values[sc];
        it.valueRef() = 0.0;
      }
    }
    if (sr >= 0) {
      if (!diagonal) missing_diagonal.push_back(r);
      b[r] = c.values[sr];
    }
  }
  for (Eigen::Index r : missing_diagonal) A.coeffRef(r, r) = 1.0;
}

void apply_dirichlet(BlockSystem& system, const SpaceSet& spaces, const DirichletData& data, double t) {
  if (system.rhs.size() != system.size()) system.rhs = Eigen::VectorXd::Zero(system.size());
  eliminate(system.matrix, system.rhs, dirichlet_constraints(spaces, data, t));
}

}  // namespace fpsi
