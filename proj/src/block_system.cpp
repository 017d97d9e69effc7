#include "fpsi/block_system.hpp"

#include <cmath>

namespace fpsi {

const char* to_string(Field f) {
  switch (f) {
    case Field::Uf: return "uf";
    case Field::Ps: return "ps";
    case Field::Ur: return "ur";
    case Field::Pp: return "pp";
    case Field::Ys: return "ys";
    case Field::Us: return "us";
  }
  return "?";
}

SpaceSet build_spaces(std::shared_ptr<const Mesh> mesh, const BoundarySetup& boundary) {
  SpaceSet s;
  s.mesh = mesh;
  s.spaces[index(Field::Uf)] = build_space(mesh, 2, 2, Restriction::Fluid, boundary.fluid_velocity);
  s.spaces[index(Field::Ps)] = build_space(mesh, 1, 1, Restriction::Fluid);
  s.spaces[index(Field::Ur)] = build_space(mesh, 2, 2, Restriction::Poro, boundary.relative_velocity);
  s.spaces[index(Field::Pp)] = build_space(mesh, 1, 1, Restriction::Poro);
  s.spaces[index(Field::Ys)] = build_space(mesh, 2, 2, Restriction::Poro, boundary.displacement);
  s.spaces[index(Field::Us)] = build_space(mesh, 1, 2, Restriction::Poro);
  return s;
}

BlockLayout BlockLayout::from(const SpaceSet& spaces) {
  BlockLayout l;
  l.offsets[0] = 0;
  for (int i = 0; i < kNumFields; ++i) l.offsets[i + 1] = l.offsets[i] + spaces.spaces[i]->num_dofs();
  return l;
}

Field BlockLayout::field_of(int i) const {
  for (int f = 0; f < kNumFields; ++f) {
    if (i < offsets[f + 1]) return static_cast<Field>(f);
  }
  throw Error("global index " + std::to_string(i) + " out of range");
}

void Contributions::append(const Contributions& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

void Contributions::scale(double s) {
  for (auto& t : entries) t = Triplet(t.row(), t.col(), s * t.value());
}

BlockSystem::BlockSystem(const BlockLayout& l, const Contributions& c) : layout(l) {
  matrix.resize(l.size(), l.size());
  matrix.setFromTriplets(c.entries.begin(), c.entries.end());
  rhs = Eigen::VectorXd::Zero(l.size());
}

SparseMatrix BlockSystem::block(Field row, Field col) const {
  return matrix.block(layout.offset(row), layout.offset(col), layout.block_size(row), layout.block_size(col));
}

std::set<std::pair<Field, Field>> BlockSystem::nonzero_blocks(double tol) const {
  std::set<std::pair<Field, Field>> out;
  for (int r = 0; r < matrix.outerSize(); ++r) {
    const Field fr = layout.field_of(r);
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it) {
      if (std::abs(it.value()) > tol) out.emplace(fr, layout.field_of(static_cast<int>(it.col())));
    }
  }
  return out;
}

StateVector::StateVector(const SpaceSet& s, double t)
    : spaces(s), layout(BlockLayout::from(s)), values(Eigen::VectorXd::Zero(layout.size())), time(t) {}

StateVector::StateVector(const SpaceSet& s, Eigen::VectorXd v, double t)
    : spaces(s), layout(BlockLayout::from(s)), values(std::move(v)), time(t) {
  if (values.size() != layout.size()) {
    throw Error("state vector length " + std::to_string(values.size()) + " does not match " +
                std::to_string(layout.size()) + " dofs");
  }
}

FieldCoefficients StateVector::field(Field f) const {
  return FieldCoefficients(spaces.ptr(f), segment(f));
}

void StateVector::set(Field f, const FieldCoefficients& c) {
  if (c.space != spaces.ptr(f)) throw Error(std::string("field ") + to_string(f) + " lives on another space");
  segment(f) = c.values;
}

}  // namespace fpsi
