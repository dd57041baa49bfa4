#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ordloc/numerics.hpp"

namespace ordloc {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Bivariate normal location family with common known sigma and known rho.
struct NormalLocationModel {
  double sigma;
  double rho;

  NormalLocationModel(double sigma_, double rho_) : sigma(sigma_), rho(rho_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw std::invalid_argument("NormalLocationModel: sigma must be positive");
    }
    if (!(rho > -1.0 && rho < 1.0)) {
      throw std::invalid_argument("NormalLocationModel: rho must lie in (-1, 1)");
    }
  }

  /// Scale of the difference D = X2 - X1: tau^2 = 2 sigma^2 (1 - rho).
  double tau() const { return sigma * std::sqrt(2.0 * (1.0 - rho)); }
};

/// A shifted bivariate density z -> f(z1, z2), assumed exchange- and
/// reflection-symmetric (validated numerically, not symbolically).
struct SymmetricDensity {
  std::function<double(double, double)> f;
  std::string support = "R^2";
  double norm_tol = 1e-8;

  double operator()(double z1, double z2) const { return f(z1, z2); }
};

enum class LossKind { squared, absolute, custom };

/// Componentwise loss W with its a.e. derivative. Custom losses must supply
/// the derivative explicitly; it enters the k1 integrand directly.
struct Loss {
  std::function<double(double)> w;
  std::function<double(double)> w_prime;
  LossKind kind = LossKind::custom;
  std::string name = "custom";

  static Loss squared();
  static Loss absolute();
  static Loss custom(std::string name, std::function<double(double)> w,
                     std::function<double(double)> w_prime);

  double operator()(double t) const { return w(t); }
};

/// Parameter point restricted to theta1 <= theta2.
struct ThetaPoint {
  double theta1;
  double theta2;

  ThetaPoint(double t1, double t2) : theta1(t1), theta2(t2) {
    if (!(theta1 <= theta2)) {
      throw std::invalid_argument("ThetaPoint: requires theta1 <= theta2");
    }
  }

  double lambda() const { return theta2 - theta1; }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// The centered bivariate normal density as an opaque SymmetricDensity.
SymmetricDensity normal_density(const NormalLocationModel& model);

struct D1Report {
  bool pass = false;
  double max_exchange_violation = 0.0;
  double max_reflection_violation = 0.0;
  std::size_t points = 0;
};

/// Checks f(z1,z2) = f(z2,z1) = f(-z1,-z2) on the grid.
D1Report validate_d1(const SymmetricDensity& density,
                     const std::vector<std::pair<double, double>>& grid, double tol);

struct D2Report {
  bool pass = false;
  bool zero_at_origin = false;
  bool even = false;
  bool decreasing_on_negative = false;
  bool increasing_on_positive = false;
  bool wprime_nondecreasing = false;
  double max_violation = 0.0;
};

/// Checks the loss conditions (W(0)=0, evenness, V-shape, W' nondecreasing)
/// on a symmetric grid of evaluation points.
D2Report validate_d2(const Loss& loss, const std::vector<double>& grid, double tol);

/// h_t(s) = int_{-inf}^t f(s, s+y) dy for the normal model, in closed form:
/// h_t(s) = phi(s/sigma)/sigma * Phi((t + s(1-rho)) / (sigma sqrt(1-rho^2))).
std::function<double(double)> partial_cdf_h(const NormalLocationModel& model, double t);

/// Same partial integral for an opaque density, by quadrature over y.
double partial_cdf_general(const SymmetricDensity& density, double t, double s,
                           double tol = 1e-10);

enum class MlrDirection { increasing, decreasing, constant };

struct MlrReport {
  bool monotone = false;
  MlrDirection direction = MlrDirection::constant;
  std::size_t skipped = 0;       // grid points with denominator below underflow guard
  std::size_t evaluated = 0;
  double max_violation = 0.0;    // worst step against the detected direction
};

/// Numerically verifies that s -> h_{t-delta}(s) / h_t(s) is monotone on the
/// grid and reports the direction.
MlrReport check_mlr(const NormalLocationModel& model, double t, double delta,
                    const std::vector<double>& s_grid);
MlrReport check_mlr(const SymmetricDensity& density, double t, double delta,
                    const std::vector<double>& s_grid, double tol = 1e-9);

/// Mass of the density over the centered box [-half, half]^2 by nested
/// quadrature. Used by normalization checks.
double density_mass(const SymmetricDensity& density, double half_width,
                    double tol = 1e-9);

}  // namespace ordloc
