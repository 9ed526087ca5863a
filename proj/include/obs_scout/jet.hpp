#pragma once

#include "obs_scout/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace obs_scout {

/// Truncated multivariate Taylor polynomial ("jet") in the five state
/// variables, dense over all monomials of total degree <= order. A jet holds
/// the Taylor coefficients of a scalar quantity about the evaluation state,
/// so nested Lie derivatives reduce to formal polynomial operations: each
/// differentiation consumes one order.
class Jet {
 public:
  static constexpr int kVars = 5;
  static constexpr int kMaxOrder = 10;

  Jet() = default;

  static Jet constant(double value, int order);
  /// Identity-seeded variable: value plus unit first-order coefficient in slot var.
  static Jet variable(double value, int var, int order);

  int order() const { return order_; }
  double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  /// First-order coefficients, one per state variable. Requires order >= 1.
  Vec5 gradient() const;
  /// Coefficient of the monomial with the given exponents (Taylor coefficient,
  /// i.e. partial derivative divided by the multi-index factorial).
  double coeff(const std::array<int, kVars>& exponents) const;

  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
  friend Jet operator/(double a, const Jet& b);

  friend Jet sin(const Jet& j);
  friend Jet cos(const Jet& j);
  friend Jet sqrt(const Jet& j);
  friend Jet atan(const Jet& j);
  friend Jet atan2(const Jet& y, const Jet& x);

  /// Formal partial derivative with respect to variable var; order drops by one.
  friend Jet partial(const Jet& j, int var);

 private:
  Jet(int order, std::vector<double> coeffs) : order_(order), coeffs_(std::move(coeffs)) {}

  /// Composition with a univariate Taylor series about value(): Horner over
  /// powers of (j - value()), exact through the jet order.
  static Jet compose(const Jet& j, const std::vector<double>& series);

  int order_ = 0;
  std::vector<double> coeffs_ = {0.0};
};

/// One jet per state dimension, all sharing the same order.
using JetVector = std::array<Jet, Jet::kVars>;

/// Identity seeding about a state: component i carries value x[i] and a unit
/// first-order coefficient in variable i.
JetVector seed(const State5& x, int order);

/// Lie derivative of scalar g along vector field f: sum_i partial(g, i) * f_i,
/// truncated to order g.order - 1. Throws if g has no orders left, naming the
/// remedy (higher seed order).
Jet lie(const Jet& g, const JetVector& f);

}  // namespace obs_scout
