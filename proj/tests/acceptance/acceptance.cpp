// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "fpsi/config.hpp"
#include "fpsi/convergence.hpp"
#include "fpsi/driver.hpp"
#include "fpsi/oracles.hpp"

#include "element_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace fpsi;

// Pinned tolerances.
constexpr double kRateVelocity = 1.8;
constexpr double kRatePressure = 1.5;
constexpr double kOracleSources = 1e-6;
constexpr double kOracleCorrections = 1e-8;
constexpr double kEnergySlack = 1e-10;
constexpr double kPenaltySymmetry = 1e-12;
constexpr double kPenaltyRatio = 1e-12;
constexpr double kElementMatch = 1e-12;
constexpr double kSolveResidual = 1e-9;
constexpr double kGammaRateSpread = 0.3;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << what << ": " << detail << std::endl;
  if (!ok) ++failures;
}

template <class F>
void guarded(int id, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

SpaceSet unit_square(int n) { return build_spaces(std::make_shared<const Mesh>(generate_structured(n, n))); }

SparseMatrix combined(const SplitContributions& s) {
  return BlockSystem(s.M.layout, s.M).matrix + BlockSystem(s.N.layout, s.N).matrix;
}

double quad_form(const SparseMatrix& A, const Eigen::VectorXd& x) { return x.dot(A * x); }

std::string rates_line(const ErrorTable& t) {
  std::ostringstream s;
  for (int i = 0; i < kNumFields; ++i) s << (i ? " " : "") << to_string(kTableFields[i]) << "=" << t.mean_rate(i, 3);
  return s.str();
}

ErrorTable study(double gamma) {
  ConvergenceOptions o;
  o.nitsche.gamma = gamma;
  return convergence_study(o);
}

void criterion_convergence(const ErrorTable& t) {
  const RateVerdict v = judge_rates(t, kRateVelocity, kRatePressure);
  std::string detail = "gamma=40 mean rates " + rates_line(t);
  for (const auto& f : v.failures) detail += "; " + f;
  report(1, v.passed, "optimal rates on h = 1/2 .. 1/32", detail);
}

void criterion_oracles() {
  const PhysicalParams p = PhysicalParams::manufactured();
  const OracleReport s = check_sources(derive_sources(p), exact_solution(), p, 200, 7, kOracleSources);
  const OracleReport c = check_corrections(derive_corrections(p), exact_solution(), p, 200, 11, kOracleCorrections);
  const OracleReport d = check_exact_derivatives(exact_solution(), 200, 3, kOracleSources);
  std::ostringstream detail;
  detail << "sources " << s.max_error << " / " << s.tolerance << ", corrections " << c.max_error << " / "
         << c.tolerance << ", derivatives " << d.max_error << " / " << d.tolerance;
  report(2, s.passed() && c.passed() && d.passed() && s.points >= 200 && c.points >= 200,
         "manufactured sources and interface defects", detail.str());
}

void criterion_energy() {
  Problem p(unit_square(8), PhysicalParams::manufactured(), NitscheParams{});
  p.convection = false;
  StateVector x(p.spaces);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : x.values) v = u(rng);
  for (int d : dirichlet_constraints(p.spaces, p.dirichlet, 0.0).dofs) x.values[d] = 0.0;
  const RunResult r = run(p, x, TimeGrid::make(1e-2, 0.5));
  double worst = -INFINITY;
  for (std::size_t n = 1; n < r.energy.size(); ++n) worst = std::max(worst, r.energy[n] - r.energy[n - 1]);
  std::ostringstream detail;
  detail << "h=1/8 tau=1e-2 steps=" << r.energy.size() - 1 << " E0=" << r.energy.front()
         << " EN=" << r.energy.back() << " max rise " << worst;
  report(3, worst <= kEnergySlack * r.energy.front(), "energy non-increasing without forcing", detail.str());
}

void criterion_penalty() {
  const PhysicalParams params = PhysicalParams::manufactured();
  bool ok = true;
  std::ostringstream detail;

  const SpaceSet s = unit_square(4);
  const auto pairs = interface_pairs(*s.mesh);
  const SparseMatrix P = combined(assemble_nitsche_penalty(s, params, {}, pairs));
  const double asym = Eigen::MatrixXd(P - SparseMatrix(P.transpose())).cwiseAbs().maxCoeff();
  ok &= asym <= kPenaltySymmetry;
  detail << "asymmetry " << asym;

  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  double min_ratio = INFINITY;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd x(P.rows());
    for (auto& v : x) v = g(rng);
    min_ratio = std::min(min_ratio, quad_form(P, x) / x.squaredNorm());
  }
  ok &= min_ratio >= -kPenaltySymmetry;
  detail << ", min x'Px/|x|^2 " << min_ratio;

  auto b = [](const Vec2& x) { return 1.0 + x.x() - 2.0 * x.x() * x.x(); };
  StateVector kernel(s);
  kernel.set(Field::Uf, interpolate(s.ptr(Field::Uf), VectorFunction([&](const Vec2& p, double) {
                                      return Vec2(std::sin(3 * p.y()), b(p) + (p.y() - 0.5) * p.x());
                                    }), 0.0));
  kernel.set(Field::Ur, interpolate(s.ptr(Field::Ur), VectorFunction([&](const Vec2& p, double) {
                                      return Vec2(p.x(), 0.5 * b(p) + (p.y() - 0.5));
                                    }), 0.0));
  kernel.set(Field::Ys, interpolate(s.ptr(Field::Ys), VectorFunction([&](const Vec2& p, double) {
                                      return Vec2(-2.0, 0.5 * b(p) - (p.y() - 0.5) * p.y());
                                    }), 0.0));
  const double kernel_form = quad_form(P, kernel.values) / kernel.values.squaredNorm();
  ok &= std::abs(kernel_form) <= kPenaltySymmetry;
  detail << ", jump-free " << kernel_form;

  // Per-facet coefficient from the midpoint basis, whose squared trace integrates to 8h/15.
  auto coefficient = [&](int n) {
    const SpaceSet sn = unit_square(n);
    const auto pn = interface_pairs(*sn.mesh);
    const SparseMatrix Pn = combined(assemble_nitsche_penalty(sn, params, {}, pn));
    const FunctionSpace& uf = sn[Field::Uf];
    StateVector x(sn);
    x.values[x.layout.offset(Field::Uf) + uf.dof(uf.facet_nodes(pn.front().facet)[2], 1)] = 1.0;
    return quad_form(Pn, x.values) / (8.0 * pn.front().h / 15.0);
  };
  const double ratio = coefficient(8) / coefficient(4);
  ok &= std::abs(ratio - 2.0) <= kPenaltyRatio;
  detail << ", coefficient ratio h/2 : h = " << ratio;
  report(4, ok, "penalty symmetric, semidefinite, jump kernel, scales as 1/h", detail.str());
}

Mesh one_triangle(const std::array<Vec2, 3>& v, Subdomain side) {
  const FacetTag t = side == Subdomain::Fluid ? FacetTag::FluidWall : FacetTag::PoroDirichlet;
  return Mesh({v[0], v[1], v[2]}, {{{0, 1, 2}, side}}, {{{0, 1}, t}, {{1, 2}, t}, {{0, 2}, t}});
}

Eigen::MatrixXd local_p2(const SpaceSet& s, const SparseMatrix& block) {
  const auto nodes = s[Field::Uf].cell_nodes(0);
  const Eigen::MatrixXd B(block);
  Eigen::MatrixXd L(12, 12);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L(2 * a + i, 2 * b + j) = B(2 * nodes[a] + i, 2 * nodes[b] + j);
  return L;
}

void criterion_elements() {
  const std::array<Vec2, 3> tri{Vec2(0.2, -0.1), Vec2(1.1, 0.3), Vec2(0.4, 0.9)};
  const oracle::Element e(tri);
  std::ostringstream detail;
  bool ok = true;

  const SpaceSet poro = build_spaces(std::make_shared<const Mesh>(one_triangle(tri, Subdomain::Poro)));
  const PhysicalParams mp = PhysicalParams::manufactured();
  const SplitContributions vp = assemble_volume_forms(poro, mp);
  const double scale = (1.0 - 0.1) * (1.0 - 0.1) / mp.bulk_modulus;
  const Eigen::MatrixXd mass = Eigen::MatrixXd(BlockSystem(vp.M.layout, vp.M).block(Field::Pp, Field::Pp)) / scale;
  Eigen::Matrix3d closed;
  closed << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  closed *= poro.mesh->cell_area(0) / 12.0;
  const double em = std::max((mass - closed).cwiseAbs().maxCoeff(), (closed - oracle::p1_mass(e)).cwiseAbs().maxCoeff());
  ok &= em <= kElementMatch * closed.cwiseAbs().maxCoeff();
  detail << "P1 mass " << em;

  const SpaceSet fluid = build_spaces(std::make_shared<const Mesh>(one_triangle(tri, Subdomain::Fluid)));
  PhysicalParams fp;
  fp.mu_f = 3.7;
  const SplitContributions vf = assemble_volume_forms(fluid, fp);
  const Eigen::MatrixXd strain = local_p2(fluid, BlockSystem(vf.N.layout, vf.N).block(Field::Uf, Field::Uf));
  const Eigen::MatrixXd strain_ref = oracle::p2_strain(e, fp.mu_f);
  const double es = (strain - strain_ref).cwiseAbs().maxCoeff() / strain_ref.cwiseAbs().maxCoeff();
  ok &= es <= kElementMatch;
  detail << ", P2 strain " << es;

  auto w = [](const Vec2& x, double) { return Vec2(1.0 + x.x() * x.y(), x.x() - 2.0 * x.y() * x.y()); };
  const Contributions c = assemble_convection(fluid, interpolate(fluid.ptr(Field::Uf), VectorFunction(w), 0.0));
  const Eigen::MatrixXd conv = local_p2(fluid, BlockSystem(c.layout, c).block(Field::Uf, Field::Uf));
  const std::array<Vec2, 6> pts{tri[0], tri[1], tri[2], 0.5 * (tri[1] + tri[2]), 0.5 * (tri[2] + tri[0]),
                                0.5 * (tri[0] + tri[1])};
  std::array<Eigen::Vector2d, 6> wn;
  for (int k = 0; k < 6; ++k) wn[k] = w(pts[k], 0.0);
  const Eigen::MatrixXd conv_ref = oracle::p2_convection(e, wn);
  const double ec = (conv - conv_ref).cwiseAbs().maxCoeff() / conv_ref.cwiseAbs().maxCoeff();
  ok &= ec <= kElementMatch;
  detail << ", P2 convection " << ec << " (relative)";
  report(5, ok, "element matrices against exact integration", detail.str());
}

void criterion_invertibility() {
  bool ok = true;
  std::ostringstream detail;
  for (int n : {2, 4})
    for (double gamma : {40.0, 80.0}) {
      NitscheParams ni;
      ni.gamma = gamma;
      const Problem p = manufactured_problem(n, PhysicalParams::manufactured(), ni);
      Stepper stepper(p, TimeGrid::make(5e-4, 5e-4));
      StepReport r;
      stepper.step(StateVector(p.spaces), 1, &r);
      ok &= r.status == "ok" && r.residual <= kSolveResidual;
      detail << "h=1/" << n << " gamma=" << gamma << ": " << r.status << " " << r.residual << "; ";
    }
  report(6, ok, "step matrix factorizes without pinning", detail.str());
}

void criterion_gamma(const ErrorTable& t40) {
  const ErrorTable t80 = study(80.0);
  bool ok = true;
  double spread = 0.0;
  for (int i = 0; i < kNumFields; ++i) {
    const double d = std::abs(t80.mean_rate(i, 3) - t40.mean_rate(i, 3));
    spread = std::max(spread, d);
    ok &= d <= kGammaRateSpread;
  }
  report(7, ok, "rates insensitive to gamma (40 vs 80)",
         "gamma=80 mean rates " + rates_line(t80) + "; max difference " + std::to_string(spread));
}

void criterion_channel() {
  auto jump = [](int nx, int ny) {
    std::ostringstream cfg;
    cfg << "mode = general\nmesh.geometry = channel\nphysics.preset = channel\nmesh.nx = " << nx
        << "\nmesh.ny = " << ny << "\ntime.tau = 1e-3\ntime.final = 0.1\ninitial.state = zero\n";
    const RunConfig c = parse_config_text(cfg.str(), "channel");
    const Problem problem = build_problem(c);
    const TimeGrid grid = TimeGrid::make(c.tau, c.final_time);
    Stepper stepper(problem, grid);
    StateVector x = initial_state(problem, c), before = x;
    for (int n = 1; n <= grid.steps; ++n) {
      before = x;
      x = stepper.step(before, n);
    }
    return std::pair(x.values.allFinite(), interface_jump_seminorm(x, before, grid.tau, problem.pairs));
  };
  const auto [finite_c, coarse] = jump(20, 14);
  const auto [finite_f, fine] = jump(40, 28);
  std::ostringstream detail;
  detail << "100 steps, jump seminorm 20x14 " << coarse << ", 40x28 " << fine;
  report(8, finite_c && finite_f && std::isfinite(coarse) && fine < coarse, "channel flow stays finite, jump shrinks",
         detail.str());
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  ErrorTable t40;
  bool have_t40 = false;
  guarded(1, "optimal rates on h = 1/2 .. 1/32", [&] {
    t40 = study(40.0);
    have_t40 = true;
    criterion_convergence(t40);
  });
  guarded(2, "manufactured sources and interface defects", criterion_oracles);
  guarded(3, "energy non-increasing without forcing", criterion_energy);
  guarded(4, "penalty symmetric, semidefinite, jump kernel, scales as 1/h", criterion_penalty);
  guarded(5, "element matrices against exact integration", criterion_elements);
  guarded(6, "step matrix factorizes without pinning", criterion_invertibility);
  if (have_t40)
    guarded(7, "rates insensitive to gamma (40 vs 80)", [&] { criterion_gamma(t40); });
  else
    report(7, false, "rates insensitive to gamma (40 vs 80)", "gamma=40 study unavailable");
  guarded(8, "channel flow stays finite, jump shrinks", criterion_channel);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << "(" << failures << " failing, " << secs << " s)" << std::endl;
  return failures ? 1 : 0;
}
