#pragma once

#include "fpsi/function_space.hpp"

#include <Eigen/Sparse>

#include <array>
#include <memory>
#include <set>
#include <utility>
#include <vector>

namespace fpsi {

/// The six unknowns in global block order.
enum class Field : int { Uf = 0, Ps = 1, Ur = 2, Pp = 3, Ys = 4, Us = 5 };
inline constexpr int kNumFields = 6;
inline constexpr std::array<Field, kNumFields> kAllFields{Field::Uf, Field::Ps, Field::Ur,
                                                         Field::Pp, Field::Ys, Field::Us};
const char* to_string(Field f);
inline int index(Field f) { return static_cast<int>(f); }

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Which external tags carry essential data for each velocity-like field.
struct BoundarySetup {
  std::set<FacetTag> fluid_velocity{FacetTag::FluidWall};
  std::set<FacetTag> relative_velocity{FacetTag::PoroDirichlet};
  std::set<FacetTag> displacement{FacetTag::PoroDirichlet};
};

/// P2^2 - P1 - P2^2 - P1 - P2^2 - P1^2 spaces on a shared mesh.
struct SpaceSet {
  std::shared_ptr<const Mesh> mesh;
  std::array<std::shared_ptr<const FunctionSpace>, kNumFields> spaces;

  const FunctionSpace& operator[](Field f) const { return *spaces[index(f)]; }
  const std::shared_ptr<const FunctionSpace>& ptr(Field f) const { return spaces[index(f)]; }
};

SpaceSet build_spaces(std::shared_ptr<const Mesh> mesh, const BoundarySetup& boundary = {});

struct BlockLayout {
  std::array<int, kNumFields + 1> offsets{};

  static BlockLayout from(const SpaceSet& spaces);
  int offset(Field f) const { return offsets[index(f)]; }
  int block_size(Field f) const { return offsets[index(f) + 1] - offsets[index(f)]; }
  int size() const { return offsets[kNumFields]; }
  /// Field owning global index `i`.
  Field field_of(int i) const;
};

/// Triplet list over the monolithic index space, addressed block-wise.
/// Exact zeros are dropped so block patterns reflect the forms that act.
struct Contributions {
  BlockLayout layout;
  std::vector<Triplet> entries;

  explicit Contributions(const BlockLayout& l) : layout(l) {}
  void add(Field row, Field col, int i, int j, double v) {
    if (v != 0.0) entries.emplace_back(layout.offset(row) + i, layout.offset(col) + j, v);
  }
  void append(const Contributions& other);
  void scale(double s);
};

/// Assembled block matrix (M, N or M/tau + N) with optional right-hand side.
struct BlockSystem {
  BlockLayout layout;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;

  BlockSystem() = default;
  BlockSystem(const BlockLayout& l, const Contributions& c);

  int size() const { return layout.size(); }
  SparseMatrix block(Field row, Field col) const;
  /// Block couplings holding an entry with |a_ij| > tol.
  std::set<std::pair<Field, Field>> nonzero_blocks(double tol = 0.0) const;
};

/// Six-field coefficient vector in global order, stamped with its time.
struct StateVector {
  SpaceSet spaces;
  BlockLayout layout;
  Eigen::VectorXd values;
  double time = 0.0;

  explicit StateVector(const SpaceSet& s, double t = 0.0);
  StateVector(const SpaceSet& s, Eigen::VectorXd v, double t);

  FieldCoefficients field(Field f) const;
  void set(Field f, const FieldCoefficients& c);
  auto segment(Field f) { return values.segment(layout.offset(f), layout.block_size(f)); }
  auto segment(Field f) const { return values.segment(layout.offset(f), layout.block_size(f)); }
};

}  // namespace fpsi
