#include "fpsi/dirichlet.hpp"
#include "fpsi/forms.hpp"
#include "fpsi/manufactured.hpp"
#include "fpsi/quadrature.hpp"

#include "element_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace fpsi;
using Block = std::pair<Field, Field>;

SpaceSet unit_square(int n) { return build_spaces(std::make_shared<const Mesh>(generate_structured(n, n))); }

Eigen::MatrixXd dense(const Contributions& c, Field r, Field col) {
  return Eigen::MatrixXd(BlockSystem(c.layout, c).block(r, col));
}

// Sum of the M and N parts, with the y_s columns read as d_tau y_s.
SparseMatrix combined(const SplitContributions& s) {
  return BlockSystem(s.M.layout, s.M).matrix + BlockSystem(s.N.layout, s.N).matrix;
}

double quad_form(const SparseMatrix& A, const Eigen::VectorXd& x) { return x.dot(A * x); }

StateVector state_of(const SpaceSet& spaces, Field f, const VectorFunction& v) {
  StateVector x(spaces);
  x.set(f, interpolate(spaces.ptr(f), v, 0.0));
  return x;
}

std::vector<InterfaceFacetPair> pairs_of(const SpaceSet& s) { return interface_pairs(*s.mesh); }

Mesh one_triangle(const std::array<Vec2, 3>& v, Subdomain side) {
  const FacetTag t = side == Subdomain::Fluid ? FacetTag::FluidWall : FacetTag::PoroDirichlet;
  return Mesh({v[0], v[1], v[2]}, {{{0, 1, 2}, side}}, {{{0, 1}, t}, {{1, 2}, t}, {{0, 2}, t}});
}

// Element matrix of `block` on cell 0 in the local P2 node order.
Eigen::MatrixXd local_p2(const SpaceSet& s, const SparseMatrix& block, Field f) {
  const auto nodes = s[f].cell_nodes(0);
  Eigen::MatrixXd L(12, 12);
  const Eigen::MatrixXd B(block);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L(2 * a + i, 2 * b + j) = B(2 * nodes[a] + i, 2 * nodes[b] + j);
  return L;
}

const std::array<Vec2, 3> kSkew{Vec2(0.2, -0.1), Vec2(1.1, 0.3), Vec2(0.4, 0.9)};

TEST(VolumeForms, ElasticityKillsConstantDisplacement) {
  const SpaceSet s = unit_square(4);
  const SplitContributions v = assemble_volume_forms(s, PhysicalParams::manufactured());
  const StateVector x = state_of(s, Field::Ys, [](const Vec2&, double) { return Vec2(0.7, -1.3); });
  const Eigen::MatrixXd K = dense(v.N, Field::Ys, Field::Ys);
  EXPECT_LE((K * x.segment(Field::Ys)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(VolumeForms, DivergenceTheoremForFreeFlowPressure) {
  const SpaceSet s = unit_square(4);
  const SplitContributions v = assemble_volume_forms(s, PhysicalParams::manufactured());
  const StateVector x = state_of(s, Field::Uf, [](const Vec2& p, double) {
    return Vec2(p.x() * p.x(), p.x() * p.y() + p.y() * p.y());
  });
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s[Field::Ps].num_dofs());
  // -(div v, 1) = -int_{boundary of the lower half} v.n = -(1/2 + 1/2).
  const double b = x.segment(Field::Uf).dot(dense(v.N, Field::Uf, Field::Ps) * ones);
  EXPECT_NEAR(b, -1.0, 1e-13);
}

TEST(VolumeForms, StrainMatchesDenseOracleOnOneElement) {
  const SpaceSet s = build_spaces(std::make_shared<const Mesh>(one_triangle(kSkew, Subdomain::Fluid)));
  PhysicalParams p;
  p.mu_f = 3.7;
  const SplitContributions v = assemble_volume_forms(s, p);
  const Eigen::MatrixXd lib = local_p2(s, BlockSystem(v.N.layout, v.N).block(Field::Uf, Field::Uf), Field::Uf);
  const Eigen::MatrixXd ref = oracle::p2_strain(oracle::Element(kSkew), p.mu_f);
  EXPECT_LE((lib - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST(VolumeForms, P1MassMatchesClosedForm) {
  const SpaceSet s = build_spaces(std::make_shared<const Mesh>(one_triangle(kSkew, Subdomain::Poro)));
  const PhysicalParams p = PhysicalParams::manufactured();
  const SplitContributions v = assemble_volume_forms(s, p);
  const double scale = (1.0 - 0.1) * (1.0 - 0.1) / p.bulk_modulus;
  const Eigen::MatrixXd m = dense(v.M, Field::Pp, Field::Pp) / scale;
  Eigen::Matrix3d expected;
  expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expected *= s.mesh->cell_area(0) / 12.0;
  EXPECT_LE((m - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Bjs, ZeroFrictionGivesNothing) {
  const SpaceSet s = unit_square(2);
  PhysicalParams p;
  p.alpha_bjs = 0.0;
  const SplitContributions b = assemble_bjs(s, p, pairs_of(s));
  EXPECT_TRUE(b.M.entries.empty());
  EXPECT_TRUE(b.N.entries.empty());
}

TEST(Bjs, TangentialAndNormalFields) {
  const SpaceSet s = unit_square(4);
  PhysicalParams p;
  p.mu_f = 1.0;
  p.alpha_bjs = 1.0;
  const SplitContributions b = assemble_bjs(s, p, pairs_of(s));
  const SparseMatrix N = BlockSystem(b.N.layout, b.N).matrix;
  const StateVector tangential = state_of(s, Field::Ur, [](const Vec2&, double) { return Vec2(1.0, 0.0); });
  const StateVector normal = state_of(s, Field::Ur, [](const Vec2&, double) { return Vec2(0.0, -1.0); });
  EXPECT_NEAR(quad_form(N, tangential.values), 1.0, 1e-13);
  EXPECT_NEAR(quad_form(N, normal.values), 0.0, 1e-13);
}

TEST(Consistency, ZeroStressGivesNothing) {
  const SpaceSet s = unit_square(4);
  NitscheParams n;
  n.varsigma = 0;
  const SparseMatrix C = combined(assemble_nitsche_consistency(s, PhysicalParams::manufactured(), n, pairs_of(s)));
  // eps(u) n.n = d u_y / dy = 0 for u = (y, x) and p = 0; only the q^S rows see its jump.
  const StateVector u = state_of(s, Field::Uf, [](const Vec2& x, double) { return Vec2(x.y(), x.x()); });
  StateVector r(s, C * u.values, 0.0);
  for (Field f : {Field::Uf, Field::Ur, Field::Ys}) EXPECT_LE(r.segment(f).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(r.segment(Field::Ps).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Consistency, UnitPressureAgainstUnitJump) {
  const SpaceSet s = unit_square(4);
  PhysicalParams p;
  p.mu_f = 123.0;
  const SplitContributions c = assemble_nitsche_consistency(s, p, {}, pairs_of(s));
  const StateVector v = state_of(s, Field::Uf, [](const Vec2&, double) { return Vec2(0.0, 1.0); });
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s[Field::Ps].num_dofs());
  EXPECT_NEAR(v.segment(Field::Uf).dot(dense(c.N, Field::Uf, Field::Ps) * ones), 1.0, 1e-13);
}

TEST(Consistency, IncompleteVariantDropsAdjointVelocityRows) {
  const SpaceSet s = unit_square(4);
  NitscheParams n;
  n.varsigma = 0;
  const SplitContributions c = assemble_nitsche_consistency(s, PhysicalParams::manufactured(), n, pairs_of(s));
  EXPECT_EQ(dense(c.N, Field::Uf, Field::Ur).norm(), 0.0);
  EXPECT_EQ(dense(c.M, Field::Uf, Field::Ys).norm(), 0.0);
  EXPECT_GT(dense(c.N, Field::Ps, Field::Ur).norm(), 0.0);
  EXPECT_GT(dense(c.M, Field::Ps, Field::Ys).norm(), 0.0);
}

TEST(Consistency, SymmetricVariantIsSelfAdjoint) {
  const SpaceSet s = unit_square(4);
  const SplitContributions c = assemble_nitsche_consistency(s, PhysicalParams::manufactured(), {}, pairs_of(s));
  const Eigen::MatrixXd ff = dense(c.N, Field::Uf, Field::Uf);
  EXPECT_LE((ff - ff.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((dense(c.N, Field::Uf, Field::Ur) - dense(c.N, Field::Ur, Field::Uf).transpose()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LE((dense(c.M, Field::Uf, Field::Ys) - dense(c.N, Field::Ys, Field::Uf).transpose()).cwiseAbs().maxCoeff(),
            1e-12);
}

class Penalty : public ::testing::Test {
 protected:
  SpaceSet s = unit_square(4);
  PhysicalParams params = PhysicalParams::manufactured();
  SparseMatrix P = combined(assemble_nitsche_penalty(s, params, {}, pairs_of(s)));
};

TEST_F(Penalty, SymmetricAndSemidefinite) {
  const Eigen::MatrixXd D(P);
  EXPECT_LE((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd x(P.rows());
    for (auto& v : x) v = g(rng);
    EXPECT_GE(quad_form(P, x), -1e-12 * x.squaredNorm());
  }
}

TEST_F(Penalty, JumpFreeStatesAreInTheKernel) {
  // u_f = (a, b(x)), u_r = (c, b(x)/2), w = (d, b(x)/2): u_f.n_S + (u_r + w).n_P = 0.
  auto b = [](const Vec2& x) { return 1.0 + x.x() - 2.0 * x.x() * x.x(); };
  StateVector x(s);
  x.set(Field::Uf, interpolate(s.ptr(Field::Uf), VectorFunction([&](const Vec2& p, double) {
                                 return Vec2(std::sin(3 * p.y()), b(p) + (p.y() - 0.5) * p.x());
                               }), 0.0));
  x.set(Field::Ur, interpolate(s.ptr(Field::Ur), VectorFunction([&](const Vec2& p, double) {
                                 return Vec2(p.x(), 0.5 * b(p) + (p.y() - 0.5));
                               }), 0.0));
  x.set(Field::Ys, interpolate(s.ptr(Field::Ys), VectorFunction([&](const Vec2& p, double) {
                                 return Vec2(-2.0, 0.5 * b(p) - (p.y() - 0.5) * p.y());
                               }), 0.0));
  EXPECT_LE(quad_form(P, x.values), 1e-12 * x.values.squaredNorm());
}

TEST_F(Penalty, UnitJumpOnTheWholeInterface) {
  // Unit normal jump: each facet gives (gamma mu_f / h_E) h_E = gamma mu_f.
  const StateVector x = state_of(s, Field::Uf, [](const Vec2&, double) { return Vec2(0.0, 1.0); });
  EXPECT_NEAR(quad_form(P, x.values), 4 * 40.0 * params.mu_f, 1e-10);
}

TEST_F(Penalty, UnitJumpOnOneFacet) {
  // Trace of the P2 midpoint basis is 4s(1-s); its square integrates to 8h/15.
  const auto pairs = pairs_of(s);
  const FunctionSpace& uf = s[Field::Uf];
  for (const auto& pair : pairs) {
    const auto nodes = uf.facet_nodes(pair.facet);
    ASSERT_EQ(nodes.size(), 3u);
    StateVector x(s);
    x.values[x.layout.offset(Field::Uf) + uf.dof(nodes[2], 1)] = 1.0;
    EXPECT_NEAR(quad_form(P, x.values) / (8.0 * pair.h / 15.0), 40.0 * params.mu_f / pair.h, 1e-9);
  }
}

TEST_F(Penalty, LinearInGamma) {
  NitscheParams n;
  n.gamma = 80.0;
  const SparseMatrix P2 = combined(assemble_nitsche_penalty(s, params, n, pairs_of(s)));
  EXPECT_LE(Eigen::MatrixXd(P2 - 2.0 * P).cwiseAbs().maxCoeff(), 1e-12 * Eigen::MatrixXd(P).cwiseAbs().maxCoeff());
}

TEST_F(Penalty, NonPositiveGammaRejected) {
  NitscheParams n;
  n.gamma = 0.0;
  EXPECT_THROW(assemble_nitsche_penalty(s, params, n, pairs_of(s)), Error);
}

TEST(Convection, ZeroAdvectionIsEmpty) {
  const SpaceSet s = unit_square(2);
  EXPECT_TRUE(assemble_convection(s, FieldCoefficients(s.ptr(Field::Uf))).entries.empty());
}

TEST(Convection, MatchesDenseOracleOnOneElement) {
  const SpaceSet s = build_spaces(std::make_shared<const Mesh>(one_triangle(kSkew, Subdomain::Fluid)));
  const oracle::Element e(kSkew);
  for (bool constant : {true, false}) {
    auto w = [constant](const Vec2& x, double) {
      return constant ? Vec2(0.3, -1.2) : Vec2(1.0 + x.x() * x.y(), x.x() - 2.0 * x.y() * x.y());
    };
    const FieldCoefficients wh = interpolate(s.ptr(Field::Uf), VectorFunction(w), 0.0);
    const Contributions c = assemble_convection(s, wh);
    const Eigen::MatrixXd lib = local_p2(s, BlockSystem(c.layout, c).block(Field::Uf, Field::Uf), Field::Uf);
    std::array<Eigen::Vector2d, 6> nodes;
    const std::array<Vec2, 6> pts{kSkew[0], kSkew[1], kSkew[2], 0.5 * (kSkew[1] + kSkew[2]),
                                  0.5 * (kSkew[2] + kSkew[0]), 0.5 * (kSkew[0] + kSkew[1])};
    for (int k = 0; k < 6; ++k) nodes[k] = w(pts[k], 0.0);
    const Eigen::MatrixXd ref = oracle::p2_convection(e, nodes);
    EXPECT_LE((lib - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff()) << "constant " << constant;
  }
}

TEST(Convection, DivergenceFreeFieldGivesBoundaryTerm) {
  const SpaceSet s = unit_square(4);
  const FieldCoefficients w = interpolate(s.ptr(Field::Uf), VectorFunction([](const Vec2&, double) {
                                            return Vec2(1.0, 0.0);
                                          }), 0.0);
  auto u = [](const Vec2& x) { return Vec2(x.x() * x.y() + 1.0, x.y() * x.y() - x.x()); };
  const StateVector x = state_of(s, Field::Uf, [&](const Vec2& p, double) { return u(p); });
  const Contributions c = assemble_convection(s, w);
  const double form = quad_form(BlockSystem(c.layout, c).matrix, x.values);
  // c(w; u, u) = 1/2 int (w.n)|u|^2 over x = 1 minus x = 0, y in (0, 1/2).
  std::vector<double> nodes, weights;
  gauss_legendre(6, nodes, weights);
  double boundary = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double y = 0.5 * nodes[k];
    boundary += 0.25 * weights[k] * (u(Vec2(1.0, y)).squaredNorm() - u(Vec2(0.0, y)).squaredNorm());
  }
  EXPECT_NEAR(form, boundary, 1e-12);
}

TEST(Assembly, PatternMatchesTheBlockDisplay) {
  const SpaceSet s = unit_square(4);
  const auto pairs = pairs_of(s);
  const PhysicalParams p = PhysicalParams::manufactured();
  using F = Field;
  const std::set<Block> m_expected{{F::Uf, F::Uf}, {F::Uf, F::Ys}, {F::Ps, F::Ys}, {F::Ur, F::Ur},
                                   {F::Ur, F::Ys}, {F::Ur, F::Us}, {F::Pp, F::Pp}, {F::Pp, F::Ys},
                                   {F::Ys, F::Ur}, {F::Ys, F::Ys}, {F::Ys, F::Us}, {F::Us, F::Ys}};
  const std::set<Block> n_expected{{F::Uf, F::Uf}, {F::Uf, F::Ps}, {F::Uf, F::Ur}, {F::Ps, F::Uf},
                                   {F::Ps, F::Ur}, {F::Ur, F::Uf}, {F::Ur, F::Ps}, {F::Ur, F::Ur},
                                   {F::Ur, F::Pp}, {F::Pp, F::Ur}, {F::Ys, F::Uf}, {F::Ys, F::Ps},
                                   {F::Ys, F::Ur}, {F::Ys, F::Ys}, {F::Ys, F::Pp}, {F::Us, F::Us}};
  EXPECT_EQ(assemble_M(s, p, {}, pairs).nonzero_blocks(), m_expected);
  EXPECT_EQ(assemble_N(s, p, {}, pairs).nonzero_blocks(), n_expected);
  EXPECT_FALSE(assemble_N(s, p, {}, pairs).nonzero_blocks().contains({F::Ps, F::Ps}));
  EXPECT_FALSE(assemble_N(s, p, {}, pairs).nonzero_blocks().contains({F::Pp, F::Pp}));
}

TEST(Assembly, ReducedMassPattern) {
  const SpaceSet s = unit_square(4);
  PhysicalParams p;
  p.alpha_bjs = 0.0;
  NitscheParams n;
  n.gamma = 0.0;
  n.varsigma = 0;
  using F = Field;
  const std::set<Block> expected{{F::Uf, F::Uf}, {F::Ps, F::Ys}, {F::Ur, F::Ur}, {F::Ur, F::Ys},
                                 {F::Ur, F::Us}, {F::Pp, F::Pp}, {F::Pp, F::Ys}, {F::Ys, F::Ur},
                                 {F::Ys, F::Ys}, {F::Ys, F::Us}, {F::Us, F::Ys}};
  EXPECT_EQ(assemble_M(s, p, n, pairs_of(s)).nonzero_blocks(), expected);
}

TEST(Assembly, MassBlocksSymmetricAndSizesAdd) {
  const SpaceSet s = unit_square(4);
  const BlockSystem M = assemble_M(s, PhysicalParams::manufactured(), {}, pairs_of(s));
  int total = 0;
  for (Field f : kAllFields) total += s[f].num_dofs();
  EXPECT_EQ(M.size(), total);
  for (Field f : {Field::Uf, Field::Pp}) {
    const Eigen::MatrixXd b(M.block(f, f));
    EXPECT_LE((b - b.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Assembly, VelocityPressureCouplingIsSkew) {
  const SpaceSet s = unit_square(4);
  NitscheParams n;
  n.varsigma = -1;
  const BlockSystem N = assemble_N(s, PhysicalParams::manufactured(), n, pairs_of(s));
  for (auto [u, p] : {Block{Field::Uf, Field::Ps}, Block{Field::Ur, Field::Ps}, Block{Field::Ur, Field::Pp}}) {
    const Eigen::MatrixXd bt(N.block(u, p)), b(N.block(p, u));
    EXPECT_LE((bt + b.transpose()).cwiseAbs().maxCoeff(), 1e-12) << to_string(u) << "," << to_string(p);
  }
}

TEST(Assembly, StaticOperatorIsNonNegativeWithoutDisplacement) {
  const SpaceSet s = unit_square(4);
  PhysicalParams p;
  p.alpha_bjs = 0.0;
  NitscheParams n;
  n.gamma = 0.0;
  n.varsigma = -1;
  const BlockSystem N = assemble_N(s, p, n, pairs_of(s));
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    StateVector x(s);
    for (auto& v : x.values) v = g(rng);
    x.segment(Field::Ys).setZero();
    EXPECT_GE(quad_form(N.matrix, x.values), -1e-10 * x.values.squaredNorm());
  }
}

TEST(Loads, NoSourcesNoCorrections) {
  const SpaceSet s = unit_square(2);
  const PhysicalParams p;
  EXPECT_EQ(assemble_F(s, p, {}, pairs_of(s), SourceSet{}, 0.5).norm(), 0.0);
}

TEST(Loads, SinkTermPartitionOfUnity) {
  const SpaceSet s = unit_square(4);
  PhysicalParams p;
  p.rho_f = 2.0;
  p.theta = ScalarCoefficient::constant(-0.6);
  const Eigen::VectorXd F = assemble_F(s, p, {}, pairs_of(s), SourceSet::general(p), 0.0);
  const BlockLayout l = BlockLayout::from(s);
  EXPECT_NEAR(F.segment(l.offset(Field::Pp), l.block_size(Field::Pp)).sum(), -0.6 / 2.0 * 0.5, 1e-14);
}

TEST(Loads, ManufacturedLoadsAtTimeZeroAreInertialOnly) {
  const SpaceSet s = unit_square(4);
  const PhysicalParams p;
  SourceSet src = derive_sources(p);
  const InterfaceCorrections cor = derive_corrections(p);
  const ExactSolution e = exact_solution();
  // u_f and u_s are linear in t, so rho_f d_t u_f survives at t = 0; everything else vanishes.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Vec2 x(u(rng), 0.5 * u(rng));
    EXPECT_LE((src.free_flow(x, 0.0) - p.rho_f * e.dt_uf(x, 0.0)).norm(), 1e-12);
    EXPECT_EQ(src.free_mass(x, 0.0), 0.0);
  }
  src.free_flow = {};
  src.fluid_momentum = {};
  src.total_momentum = {};
  EXPECT_LE(assemble_F(s, p, {}, pairs_of(s), src, 0.0, &cor).cwiseAbs().maxCoeff(), 1e-12);
}

// Residual of the exact interpolants in one backward Euler step, free dofs only.
double exact_residual(int n) {
  const SpaceSet s = unit_square(n);
  const auto pairs = pairs_of(s);
  const PhysicalParams p;
  const NitscheParams nit;
  const ExactSolution e = exact_solution();
  const double tau = 1e-3 / n, T = 1e-3;
  auto interp = [&](double t) {
    StateVector x(s, t);
    x.set(Field::Uf, interpolate(s.ptr(Field::Uf), e.uf, t));
    x.set(Field::Ps, interpolate(s.ptr(Field::Ps), e.ps, t));
    x.set(Field::Ur, interpolate(s.ptr(Field::Ur), e.ur, t));
    x.set(Field::Pp, interpolate(s.ptr(Field::Pp), e.pp, t));
    x.set(Field::Ys, interpolate(s.ptr(Field::Ys), e.ys, t));
    x.set(Field::Us, interpolate(s.ptr(Field::Us), e.us, t));
    return x;
  };
  const StateVector now = interp(T), before = interp(T - tau);
  const FieldCoefficients w = before.field(Field::Uf);
  const SparseMatrix M = assemble_M(s, p, nit, pairs).matrix;
  const SparseMatrix N = assemble_N(s, p, nit, pairs, &w).matrix;
  const SourceSet src = derive_sources(p);
  const InterfaceCorrections cor = derive_corrections(p);
  Eigen::VectorXd r = (M / tau + N) * now.values - assemble_F(s, p, nit, pairs, src, T, &cor) -
                      M * before.values / tau;
  for (int d : dirichlet_constraints(s, manufactured_dirichlet(), T).dofs) r[d] = 0.0;
  return r.norm();
}

TEST(Assembly, ExactSolutionResidualShrinksUnderRefinement) {
  const double r4 = exact_residual(4), r8 = exact_residual(8), r16 = exact_residual(16);
  EXPECT_LT(r8, 0.5 * r4);
  EXPECT_LT(r16, 0.5 * r8);
}

}  // namespace
