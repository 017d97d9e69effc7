#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace fpsi {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Free-flow (Stokes/Navier-Stokes) or poroelastic side of the coupled domain.
enum class Subdomain : unsigned char { Fluid, Poro };

/// Facet classification. Interior facets carry no boundary condition; Sigma is
/// the fluid-poroelastic interface.
enum class FacetTag : unsigned char {
  Interior,
  FluidWall,       // Gamma_S, essential velocity data
  FluidOutflow,    // Gamma_S, zero traction
  PoroDirichlet,   // Gamma_P^D
  PoroNeumann,     // Gamma_P^N
  Sigma,
};

const char* to_string(Subdomain s);
const char* to_string(FacetTag t);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class OracleMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace fpsi
