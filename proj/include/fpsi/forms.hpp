#pragma once

#include "fpsi/block_system.hpp"
#include "fpsi/params.hpp"

#include <optional>

namespace fpsi {

inline constexpr int kVolumeQuadratureDegree = 6;
inline constexpr int kEdgeQuadratureDegree = 6;

/// Contributions split by the DAE matrix they belong to.
struct SplitContributions {
  Contributions M;
  Contributions N;

  explicit SplitContributions(const BlockLayout& l) : M(l), N(l) {}
  void append(const SplitContributions& o) {
    M.append(o.M);
    N.append(o.N);
  }
};

/// Volume loads for each test-function row. `fluid_momentum` and
/// `total_momentum` are the full right-hand sides of the v_r and w_s
/// equations; general() builds them from a body force f_P.
struct SourceSet {
  VectorFunction free_flow;       // f_S
  VectorFunction fluid_momentum;  // load on v_r
  VectorFunction total_momentum;  // load on w_s
  ScalarFunction free_mass;       // r_S
  ScalarFunction pore_mass;       // load on q^P

  /// (f_S, rho_f phi f_P, rho_p f_P, r_S, theta / rho_f). Empty functions are zero.
  static SourceSet general(const PhysicalParams& params, VectorFunction f_s = {}, VectorFunction f_p = {},
                           ScalarFunction r_s = {});
  /// True when no load is set.
  bool empty() const { return !free_flow && !fluid_momentum && !total_momentum && !free_mass && !pore_mass; }
};

/// Defects of the five interface conditions, as functions of (x, t) on Sigma.
struct InterfaceCorrections {
  ScalarFunction m1;  // mass conservation
  ScalarFunction m2;  // balance of normal stress
  VectorFunction m3;  // balance of contact forces
  ScalarFunction m4;  // BJS, free fluid
  ScalarFunction m5;  // BJS, pore fluid
};

/// a_f^S, a_f^P, a_s^P, the three divergence couplings and every m_xi mass term.
SplitContributions assemble_volume_forms(const SpaceSet& spaces, const PhysicalParams& params);

/// a_BJS on (u_f, y_s) and b_BJS on u_r with coefficient mu_f alpha / sqrt(Z).
SplitContributions assemble_bjs(const SpaceSet& spaces, const PhysicalParams& params,
                                const std::vector<InterfaceFacetPair>& pairs);

/// b_Gamma(v; u_f, p^S) and its varsigma-weighted adjoint.
SplitContributions assemble_nitsche_consistency(const SpaceSet& spaces, const PhysicalParams& params,
                                                const NitscheParams& nitsche,
                                                const std::vector<InterfaceFacetPair>& pairs);

/// c_Gamma with per-facet coefficient gamma mu_f / h_E. Rejects gamma <= 0.
SplitContributions assemble_nitsche_penalty(const SpaceSet& spaces, const PhysicalParams& params,
                                            const NitscheParams& nitsche,
                                            const std::vector<InterfaceFacetPair>& pairs);

/// (w . grad u, v) on the (u_f, u_f) block of N.
Contributions assemble_convection(const SpaceSet& spaces, const FieldCoefficients& previous_velocity);

/// M. A penalty parameter of exactly zero omits c_Gamma (diagnostic use).
BlockSystem assemble_M(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                       const std::vector<InterfaceFacetPair>& pairs);

/// N without the convection block.
SplitContributions assemble_N_static(const SpaceSet& spaces, const PhysicalParams& params,
                                     const NitscheParams& nitsche, const std::vector<InterfaceFacetPair>& pairs);

/// N including convection when `previous_velocity` is given.
BlockSystem assemble_N(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                       const std::vector<InterfaceFacetPair>& pairs,
                       const FieldCoefficients* previous_velocity = nullptr);

/// Load vector F at `time`, plus the interface-correction functionals when
/// `corrections` is given.
Eigen::VectorXd assemble_F(const SpaceSet& spaces, const PhysicalParams& params, const NitscheParams& nitsche,
                           const std::vector<InterfaceFacetPair>& pairs, const SourceSet& sources, double time,
                           const InterfaceCorrections* corrections = nullptr);

/// sum_E h_E^{-1} || u_f.n_S + (u_r + d_tau y_s).n_P ||^2_{0,E}, with
/// d_tau y_s = (y^n - y^{n-1}) / tau.
double interface_jump_seminorm(const StateVector& current, const StateVector& previous, double tau,
                               const std::vector<InterfaceFacetPair>& pairs);

}  // namespace fpsi
