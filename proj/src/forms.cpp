#include "fpsi/forms.hpp"

#include "fpsi/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <tuple>

namespace fpsi {

SourceSet SourceSet::general(const PhysicalParams& params, VectorFunction f_s, VectorFunction f_p,
                             ScalarFunction r_s) {
  SourceSet s;
  s.free_flow = std::move(f_s);
  s.free_mass = std::move(r_s);
  if (f_p) {
    const auto phi = params.phi;
    const PhysicalParams p = params;
    s.fluid_momentum = [f_p, phi, rf = params.rho_f](const Vec2& x, double t) {
      return (rf * phi(x) * f_p(x, t)).eval();
    };
    s.total_momentum = [f_p, p](const Vec2& x, double t) { return (p.rho_p(x) * f_p(x, t)).eval(); };
  }
  if (!(params.theta.is_constant() && params.theta.constant_value() == 0.0)) {
    s.pore_mass = [theta = params.theta, rf = params.rho_f](const Vec2& x, double) { return theta(x) / rf; };
  }
  return s;
}

namespace {

enum Kind { kM = 0, kN = 1 };

int local_size(const FunctionSpace& s) { return s.nodes_per_cell() * s.components(); }

/// Dense per-cell (or per-facet) blocks, scattered once complete.
class LocalBlocks {
 public:
  explicit LocalBlocks(const SpaceSet& spaces) : spaces_(spaces) {}

  Eigen::MatrixXd& at(Kind k, Field r, Field c) {
    auto& m = blocks_[{k, index(r), index(c)}];
    if (m.size() == 0) m = Eigen::MatrixXd::Zero(local_size(spaces_[r]), local_size(spaces_[c]));
    return m;
  }

  /// Scatters every block; `cell_of` gives the mesh cell hosting each field.
  template <class CellOf>
  void flush(SplitContributions& out, CellOf&& cell_of) {
    for (auto& [key, m] : blocks_) {
      const auto [k, ri, ci] = key;
      const Field r = static_cast<Field>(ri), c = static_cast<Field>(ci);
      const FunctionSpace& sr = spaces_[r];
      const FunctionSpace& sc = spaces_[c];
      const auto rn = sr.cell_nodes(cell_of(r));
      const auto cn = sc.cell_nodes(cell_of(c));
      const int rc = sr.components(), cc = sc.components();
      Contributions& target = k == kM ? out.M : out.N;
      for (int i = 0; i < m.rows(); ++i) {
        const int gi = rn[i / rc] * rc + i % rc;
        for (int j = 0; j < m.cols(); ++j) {
          target.add(r, c, gi, cn[j / cc] * cc + j % cc, m(i, j));
        }
      }
    }
    blocks_.clear();
  }

 private:
  const SpaceSet& spaces_;
  std::map<std::tuple<int, int, int>, Eigen::MatrixXd> blocks_;
};

// Block kernels. Vector-valued local index is a * 2 + c for basis N_a e_c.

void add_scalar_mass(Eigen::MatrixXd& L, const ShapeValues& r, const ShapeValues& c, double w) {
  for (int a = 0; a < r.n; ++a)
    for (int b = 0; b < c.n; ++b) L(a, b) += w * r.value[a] * c.value[b];
}

void add_vector_mass(Eigen::MatrixXd& L, const ShapeValues& r, const ShapeValues& c, double w) {
  for (int a = 0; a < r.n; ++a)
    for (int b = 0; b < c.n; ++b) {
      const double v = w * r.value[a] * c.value[b];
      L(2 * a, 2 * b) += v;
      L(2 * a + 1, 2 * b + 1) += v;
    }
}

void add_tensor_mass(Eigen::MatrixXd& L, const ShapeValues& r, const ShapeValues& c, const Mat2& k, double w) {
  for (int a = 0; a < r.n; ++a)
    for (int b = 0; b < c.n; ++b) {
      const double v = w * r.value[a] * c.value[b];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L(2 * a + i, 2 * b + j) += v * k(i, j);
    }
}

/// w * eps(N_a e_i) : eps(N_b e_j)
void add_strain(Eigen::MatrixXd& L, const ShapeValues& s, double w) {
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b) {
      const Vec2& ga = s.grad[a];
      const Vec2& gb = s.grad[b];
      const double dot = ga.dot(gb);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          L(2 * a + i, 2 * b + j) += w * 0.5 * ((i == j ? dot : 0.0) + ga[j] * gb[i]);
        }
    }
}

void add_divdiv(Eigen::MatrixXd& L, const ShapeValues& s, double w) {
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L(2 * a + i, 2 * b + j) += w * s.grad[a][i] * s.grad[b][j];
}

/// Row vector test, column scalar trial: w * (div(phi v) , p) with
/// div(phi v) = phi div v + grad(phi).v.
void add_div_pressure(Eigen::MatrixXd& L, const ShapeValues& v, const ShapeValues& p, double phi,
                      const Vec2& grad_phi, double w) {
  for (int a = 0; a < v.n; ++a)
    for (int i = 0; i < 2; ++i) {
      const double d = phi * v.grad[a][i] + grad_phi[i] * v.value[a];
      for (int b = 0; b < p.n; ++b) L(2 * a + i, b) += w * d * p.value[b];
    }
}

/// Row scalar test, column vector trial.
void add_pressure_div(Eigen::MatrixXd& L, const ShapeValues& q, const ShapeValues& u, double phi,
                      const Vec2& grad_phi, double w) {
  for (int a = 0; a < q.n; ++a)
    for (int b = 0; b < u.n; ++b)
      for (int j = 0; j < 2; ++j) {
        L(a, 2 * b + j) += w * q.value[a] * (phi * u.grad[b][j] + grad_phi[j] * u.value[b]);
      }
}

template <class Body>
void for_each_volume_point(const Mesh& mesh, int cell, Body&& body) {
  const auto& rule = quadrature_rule(Entity::Triangle, kVolumeQuadratureDegree);
  const CellGeometry g(mesh, cell);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const ShapeValues s1 = shape_functions(1, rule.points[q], g);
    const ShapeValues s2 = shape_functions(2, rule.points[q], g);
    body(g.map(rule.points[q]), rule.weights[q] * 2.0 * g.area, s1, s2);
  }
}

/// Quadrature on an interface facet with shape functions from both sides.
struct EdgePoint {
  Vec2 x;
  double w;
  ShapeValues f1, f2, p1, p2;
};

std::array<double, 3> facet_barycentric(const Mesh& mesh, int cell, int facet, double s) {
  const int e = mesh.local_edge(cell, facet);
  const int first = mesh.cells()[cell].vertices[(e + 1) % 3];
  return edge_point(e, first == mesh.facets()[facet].vertices[0] ? s : 1.0 - s);
}

template <class Body>
void for_each_edge_point(const Mesh& mesh, const InterfaceFacetPair& pair, Body&& body) {
  const auto& rule = quadrature_rule(Entity::Segment, kEdgeQuadratureDegree);
  const CellGeometry gf(mesh, pair.fluid_cell), gp(mesh, pair.poro_cell);
  const auto& fv = mesh.facets()[pair.facet].vertices;
  const Vec2& A = mesh.vertices()[fv[0]];
  const Vec2& B = mesh.vertices()[fv[1]];
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q][1];
    EdgePoint p;
    p.x = (1.0 - s) * A + s * B;
    p.w = rule.weights[q] * pair.h;
    const auto lf = facet_barycentric(mesh, pair.fluid_cell, pair.facet, s);
    const auto lp = facet_barycentric(mesh, pair.poro_cell, pair.facet, s);
    p.f1 = shape_functions(1, lf, gf);
    p.f2 = shape_functions(2, lf, gf);
    p.p1 = shape_functions(1, lp, gp);
    p.p2 = shape_functions(2, lp, gp);
    body(p);
  }
}

/// Traces of the vector basis N_a e_i on a facet.
Eigen::VectorXd normal_trace(const ShapeValues& s, const Vec2& n) {
  Eigen::VectorXd v(2 * s.n);
  for (int a = 0; a < s.n; ++a)
    for (int i = 0; i < 2; ++i) v[2 * a + i] = s.value[a] * n[i];
  return v;
}

Eigen::VectorXd scalar_trace(const ShapeValues& s) {
  Eigen::VectorXd v(s.n);
  for (int a = 0; a < s.n; ++a) v[a] = s.value[a];
  return v;
}

/// 2 mu (eps(N_a e_i) n) . n = 2 mu n_i (grad N_a . n)
Eigen::VectorXd normal_stress_trace(const ShapeValues& s, const Vec2& n, double mu) {
  Eigen::VectorXd v(2 * s.n);
  for (int a = 0; a < s.n; ++a)
    for (int i = 0; i < 2; ++i) v[2 * a + i] = 2.0 * mu * n[i] * s.grad[a].dot(n);
  return v;
}

constexpr std::array<Field, 3> jump_fields{Field::Uf, Field::Ur, Field::Ys};

struct JumpTraces {
  Eigen::VectorXd uf, ur, ys;
  const Eigen::VectorXd& operator[](Field f) const { return f == Field::Uf ? uf : f == Field::Ur ? ur : ys; }
};

JumpTraces jump_traces(const EdgePoint& p, const InterfaceFacetPair& pair) {
  return {normal_trace(p.f2, pair.normal_fluid), normal_trace(p.p2, pair.normal_poro),
          normal_trace(p.p2, pair.normal_poro)};
}

auto pair_cells(const InterfaceFacetPair& pair) {
  return [&pair](Field f) { return f == Field::Uf || f == Field::Ps ? pair.fluid_cell : pair.poro_cell; };
}

}  // namespace

SplitContributions assemble_volume_forms(const SpaceSet& spaces, const PhysicalParams& params) {
  const Mesh& mesh = *spaces.mesh;
  if (&spaces[Field::Uf].mesh() != &mesh) throw Error("spaces are built on a different mesh");
  SplitContributions out(BlockLayout::from(spaces));
  LocalBlocks lb(spaces);
  const double mu = params.mu_f;

  for (int cell : spaces[Field::Uf].cells()) {
    for_each_volume_point(mesh, cell, [&](const Vec2&, double w, const ShapeValues& s1, const ShapeValues& s2) {
      add_vector_mass(lb.at(kM, Field::Uf, Field::Uf), s2, s2, params.rho_f * w);
      add_strain(lb.at(kN, Field::Uf, Field::Uf), s2, 2.0 * mu * w);
      // b^S(v, p) = -(div v, p) and -b^S(u, q) = (div u, q)
      add_div_pressure(lb.at(kN, Field::Uf, Field::Ps), s2, s1, 1.0, Vec2::Zero(), -w);
      add_pressure_div(lb.at(kN, Field::Ps, Field::Uf), s1, s2, 1.0, Vec2::Zero(), w);
    });
    lb.flush(out, [cell](Field) { return cell; });
  }

  for (int cell : spaces[Field::Ur].cells()) {
    for_each_volume_point(mesh, cell, [&](const Vec2& x, double w, const ShapeValues& s1, const ShapeValues& s2) {
      const double phi = params.phi(x);
      const Vec2 gphi = params.phi.gradient(x);
      const double theta = params.theta(x);
      const double rho_p = params.rho_p(x);
      const double rfphi = params.rho_f * phi;
      const Mat2 kinv = params.kappa(x).inverse();

      // time-derivative couplings
      add_vector_mass(lb.at(kM, Field::Ys, Field::Ur), s2, s2, rfphi * w);
      add_vector_mass(lb.at(kM, Field::Ys, Field::Us), s2, s1, rho_p * w);
      add_vector_mass(lb.at(kM, Field::Ur, Field::Ur), s2, s2, rfphi * w);
      add_vector_mass(lb.at(kM, Field::Ur, Field::Us), s2, s1, rfphi * w);
      add_vector_mass(lb.at(kM, Field::Us, Field::Ys), s1, s2, -rho_p * w);
      for (Field row : {Field::Ur, Field::Ys}) {
        add_strain(lb.at(kM, row, Field::Ys), s2, 2.0 * mu * phi * w);
        if (theta != 0.0) add_vector_mass(lb.at(kM, row, Field::Ys), s2, s2, -theta * w);
      }
      add_scalar_mass(lb.at(kM, Field::Pp, Field::Pp), s1, s1,
                      (1.0 - phi) * (1.0 - phi) / params.bulk_modulus * w);
      // -b_s^P(d_t y, q) = (div d_t y, q)
      add_pressure_div(lb.at(kM, Field::Pp, Field::Ys), s1, s2, 1.0, Vec2::Zero(), w);

      // remaining couplings
      add_vector_mass(lb.at(kN, Field::Us, Field::Us), s1, s1, rho_p * w);
      for (Field row : {Field::Ur, Field::Ys}) {
        add_strain(lb.at(kN, row, Field::Ur), s2, 2.0 * mu * phi * w);
        if (theta != 0.0) add_vector_mass(lb.at(kN, row, Field::Ur), s2, s2, -theta * w);
      }
      add_tensor_mass(lb.at(kN, Field::Ur, Field::Ur), s2, s2, phi * phi * kinv, w);
      add_strain(lb.at(kN, Field::Ys, Field::Ys), s2, 2.0 * params.mu_p * w);
      add_divdiv(lb.at(kN, Field::Ys, Field::Ys), s2, params.lambda_p * w);
      add_div_pressure(lb.at(kN, Field::Ys, Field::Pp), s2, s1, 1.0, Vec2::Zero(), -w);
      add_div_pressure(lb.at(kN, Field::Ur, Field::Pp), s2, s1, phi, gphi, -w);
      add_pressure_div(lb.at(kN, Field::Pp, Field::Ur), s1, s2, phi, gphi, w);
    });
    lb.flush(out, [cell](Field) { return cell; });
  }
  return out;
}

SplitContributions assemble_bjs(const SpaceSet& spaces, const PhysicalParams& params,
                                const std::vector<InterfaceFacetPair>& pairs) {
  SplitContributions out(BlockLayout::from(spaces));
  if (params.alpha_bjs == 0.0) return out;
  LocalBlocks lb(spaces);
  for (const auto& pair : pairs) {
    if (!(pair.z > 0.0)) throw Error("non-positive Z on interface facet " + std::to_string(pair.facet));
    const double beta = params.mu_f * params.alpha_bjs / std::sqrt(pair.z);
    for_each_edge_point(*spaces.mesh, pair, [&](const EdgePoint& p) {
      const Eigen::VectorXd tf = normal_trace(p.f2, pair.tangent);
      const Eigen::VectorXd tp = normal_trace(p.p2, pair.tangent);
      const double c = beta * p.w;
      lb.at(kN, Field::Uf, Field::Uf) += c * tf * tf.transpose();
      lb.at(kN, Field::Ys, Field::Uf) -= c * tp * tf.transpose();
      lb.at(kN, Field::Ur, Field::Ur) += c * tp * tp.transpose();
      lb.at(kM, Field::Uf, Field::Ys) -= c * tf * tp.transpose();
      lb.at(kM, Field::Ys, Field::Ys) += c * tp * tp.transpose();
    });
    lb.flush(out, pair_cells(pair));
  }
  return out;
}

SplitContributions assemble_nitsche_consistency(const SpaceSet& spaces, const PhysicalParams& params,
                                                const NitscheParams& nitsche,
                                                const std::vector<InterfaceFacetPair>& pairs) {
  SplitContributions out(BlockLayout::from(spaces));
  LocalBlocks lb(spaces);
  const double sigma = nitsche.varsigma;
  for (const auto& pair : pairs) {
    for_each_edge_point(*spaces.mesh, pair, [&](const EdgePoint& p) {
      const JumpTraces J = jump_traces(p, pair);
      const Eigen::VectorXd S = normal_stress_trace(p.f2, pair.normal_fluid, params.mu_f);
      const Eigen::VectorXd P = scalar_trace(p.f1);
      for (Field f : jump_fields) {
        // b_Gamma(v; u_f, p^S) = -int (2 mu eps(u_f) n.n - p^S) [v.n]
        lb.at(kN, f, Field::Uf) -= p.w * J[f] * S.transpose();
        lb.at(kN, f, Field::Ps) += p.w * J[f] * P.transpose();
        // b_Gamma(u; varsigma v_f, -q^S) = -int (varsigma 2 mu eps(v_f) n.n + q^S) [u.n]
        const Kind k = f == Field::Ys ? kM : kN;
        if (sigma != 0.0) lb.at(k, Field::Uf, f) -= sigma * p.w * S * J[f].transpose();
        lb.at(k, Field::Ps, f) -= p.w * P * J[f].transpose();
      }
    });
    lb.flush(out, pair_cells(pair));
  }
  return out;
}

SplitContributions assemble_nitsche_penalty(const SpaceSet& spaces, const PhysicalParams& params,
                                            const NitscheParams& nitsche,
                                            const std::vector<InterfaceFacetPair>& pairs) {
  if (!(nitsche.gamma > 0.0)) throw Error("penalty parameter gamma must be positive");
  SplitContributions out(BlockLayout::from(spaces));
  LocalBlocks lb(spaces);
  for (const auto& pair : pairs) {
    const double coef = nitsche.gamma * params.mu_f / pair.h;
    for_each_edge_point(*spaces.mesh, pair, [&](const EdgePoint& p) {
      const JumpTraces J = jump_traces(p, pair);
      for (Field r : jump_fields) {
        for (Field c : jump_fields) {
          lb.at(c == Field::Ys ? kM : kN, r, c) += coef * p.w * J[r] * J[c].transpose();
        }
      }
    });
    lb.flush(out, pair_cells(pair));
  }
  return out;
}

Contributions assemble_convection(const SpaceSet& spaces, const FieldCoefficients& previous_velocity) {
  if (previous_velocity.space != spaces.ptr(Field::Uf)) {
    throw Error("advecting velocity must live in the free-flow velocity space");
  }
  SplitContributions out(BlockLayout::from(spaces));
  if (previous_velocity.values.cwiseAbs().maxCoeff() == 0.0) return out.N;
  LocalBlocks lb(spaces);
  for (int cell : spaces[Field::Uf].cells()) {
    for_each_volume_point(*spaces.mesh, cell, [&](const Vec2&, double w, const ShapeValues&, const ShapeValues& s2) {
      const Vec2 adv = evaluate_vector(previous_velocity, cell, s2);
      auto& L = lb.at(kN, Field::Uf, Field::Uf);
      for (int a = 0; a < s2.n; ++a)
        for (int b = 0; b < s2.n; ++b) {
          const double v = w * s2.value[a] * adv.dot(s2.grad[b]);
          L(2 * a, 2 * b) += v;
          L(2 * a + 1, 2 * b + 1) += v;
        }
    });
    lb.flush(out, [cell](Field) { return cell; });
  }
  return out.N;
}

namespace {

SplitContributions assemble_linear(const SpaceSet& spaces, const PhysicalParams& params,
                                   const NitscheParams& nitsche, const std::vector<InterfaceFacetPair>& pairs) {
  SplitContributions all = assemble_volume_forms(spaces, params);
  all.append(assemble_bjs(spaces, params, pairs));
  all.append(assemble_nitsche_consistency(spaces, params, nitsche, pairs));
  if (nitsche.gamma != 0.0) all.append(assemble_nitsche_penalty(spaces, params, nitsche, pairs));
  return all;
}

}  // namespace

BlockSystem assemble_M(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                       const std::vector<InterfaceFacetPair>& pairs) {
  const SplitContributions all = assemble_linear(spaces, params, nitsche, pairs);
  return BlockSystem(all.M.layout, all.M);
}

SplitContributions assemble_N_static(const SpaceSet& spaces, const PhysicalParams& params,
                                     const NitscheParams& nitsche, const std::vector<InterfaceFacetPair>& pairs) {
  return assemble_linear(spaces, params, nitsche, pairs);
}

BlockSystem assemble_N(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                       const std::vector<InterfaceFacetPair>& pairs, const FieldCoefficients* previous_velocity) {
  SplitContributions all = assemble_linear(spaces, params, nitsche, pairs);
  if (previous_velocity) all.N.append(assemble_convection(spaces, *previous_velocity));
  return BlockSystem(all.N.layout, all.N);
}

Eigen::VectorXd assemble_F(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                           const std::vector<InterfaceFacetPair>& pairs, const SourceSet& sources, double time,
                           const InterfaceCorrections* corrections) {
  const BlockLayout layout = BlockLayout::from(spaces);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(layout.size());
  const Mesh& mesh = *spaces.mesh;

  auto add_vector = [&](Field f, int cell, const ShapeValues& s, const Vec2& load, double w) {
    const auto nodes = spaces[f].cell_nodes(cell);
    for (int a = 0; a < s.n; ++a)
      for (int i = 0; i < 2; ++i) F[layout.offset(f) + 2 * nodes[a] + i] += w * s.value[a] * load[i];
  };
  auto add_scalar = [&](Field f, int cell, const ShapeValues& s, double load, double w) {
    const auto nodes = spaces[f].cell_nodes(cell);
    for (int a = 0; a < s.n; ++a) F[layout.offset(f) + nodes[a]] += w * s.value[a] * load;
  };

  if (sources.free_flow || sources.free_mass) {
    for (int cell : spaces[Field::Uf].cells()) {
      for_each_volume_point(mesh, cell, [&](const Vec2& x, double w, const ShapeValues& s1, const ShapeValues& s2) {
        if (sources.free_flow) add_vector(Field::Uf, cell, s2, sources.free_flow(x, time), w);
        if (sources.free_mass) add_scalar(Field::Ps, cell, s1, sources.free_mass(x, time), w);
      });
    }
  }
  if (sources.fluid_momentum || sources.total_momentum || sources.pore_mass) {
    for (int cell : spaces[Field::Ur].cells()) {
      for_each_volume_point(mesh, cell, [&](const Vec2& x, double w, const ShapeValues& s1, const ShapeValues& s2) {
        if (sources.fluid_momentum) add_vector(Field::Ur, cell, s2, sources.fluid_momentum(x, time), w);
        if (sources.total_momentum) add_vector(Field::Ys, cell, s2, sources.total_momentum(x, time), w);
        if (sources.pore_mass) add_scalar(Field::Pp, cell, s1, sources.pore_mass(x, time), w);
      });
    }
  }

  if (corrections) {
    for (const auto& pair : pairs) {
      const double pen = nitsche.gamma * params.mu_f / pair.h;
      const Vec2& nS = pair.normal_fluid;
      const Vec2& nP = pair.normal_poro;
      const Vec2& tau = pair.tangent;
      for_each_edge_point(mesh, pair, [&](const EdgePoint& p) {
        const double m1 = corrections->m1 ? corrections->m1(p.x, time) : 0.0;
        const double m2 = corrections->m2 ? corrections->m2(p.x, time) : 0.0;
        const Vec2 m3 = corrections->m3 ? corrections->m3(p.x, time) : Vec2::Zero().eval();
        const double m4 = corrections->m4 ? corrections->m4(p.x, time) : 0.0;
        const double m5 = corrections->m5 ? corrections->m5(p.x, time) : 0.0;

        const Eigen::VectorXd S = normal_stress_trace(p.f2, nS, params.mu_f);
        const auto fn = spaces[Field::Uf].cell_nodes(pair.fluid_cell);
        for (int a = 0; a < p.f2.n; ++a)
          for (int i = 0; i < 2; ++i) {
            const double v = p.f2.value[a];
            F[layout.offset(Field::Uf) + 2 * fn[a] + i] +=
                p.w * (pen * m1 * v * nS[i] - nitsche.varsigma * m1 * S[2 * a + i] - m4 * v * tau[i]);
          }
        const auto rn = spaces[Field::Ur].cell_nodes(pair.poro_cell);
        const auto yn = spaces[Field::Ys].cell_nodes(pair.poro_cell);
        for (int a = 0; a < p.p2.n; ++a)
          for (int i = 0; i < 2; ++i) {
            const double v = p.p2.value[a];
            F[layout.offset(Field::Ur) + 2 * rn[a] + i] += p.w * v * ((pen * m1 + m2) * nP[i] - m5 * tau[i]);
            F[layout.offset(Field::Ys) + 2 * yn[a] + i] += p.w * v * (pen * m1 * nP[i] + m3[i] + m4 * tau[i]);
          }
        add_scalar(Field::Ps, pair.fluid_cell, p.f1, -m1, p.w);
      });
    }
  }
  return F;
}

double interface_jump_seminorm(const StateVector& current, const StateVector& previous, double tau,
                               const std::vector<InterfaceFacetPair>& pairs) {
  const FieldCoefficients uf = current.field(Field::Uf);
  const FieldCoefficients ur = current.field(Field::Ur);
  FieldCoefficients dy = current.field(Field::Ys);
  dy.values = (dy.values - previous.segment(Field::Ys)) / tau;
  double total = 0.0;
  for (const auto& pair : pairs) {
    double facet = 0.0;
    for_each_edge_point(*current.spaces.mesh, pair, [&](const EdgePoint& p) {
      const double j = evaluate_vector(uf, pair.fluid_cell, p.f2).dot(pair.normal_fluid) +
                       (evaluate_vector(ur, pair.poro_cell, p.p2) + evaluate_vector(dy, pair.poro_cell, p.p2))
                           .dot(pair.normal_poro);
      facet += p.w * j * j;
    });
    total += facet / pair.h;
  }
  return total;
}

}  // namespace fpsi
