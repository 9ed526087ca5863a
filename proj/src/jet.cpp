#include "obs_scout/jet.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

namespace obs_scout {
namespace {

// Global monomial basis for 5 variables, graded by total degree (so a jet of
// order k occupies the first count(k) slots), monomials within a degree in
// lexicographic order with the first variable most significant. Degree-1
// monomials therefore sit at positions 1..5 in variable order.
struct MonomialTable {
  std::vector<std::array<std::uint8_t, Jet::kVars>> exponents;
  std::vector<int> degree_of;
  std::array<int, Jet::kMaxOrder + 2> offset{};  // offset[d] = first index of degree d
  std::unordered_map<std::uint64_t, int> index;

  static std::uint64_t pack(const std::array<std::uint8_t, Jet::kVars>& e) {
    std::uint64_t key = 0;
    for (int i = 0; i < Jet::kVars; ++i) key = key << 12 | e[i];
    return key;
  }

  MonomialTable() {
    std::array<std::uint8_t, Jet::kVars> e{};
    for (int d = 0; d <= Jet::kMaxOrder; ++d) {
      offset[d] = static_cast<int>(exponents.size());
      emit(e, 0, d, d);
    }
    offset[Jet::kMaxOrder + 1] = static_cast<int>(exponents.size());
    for (int i = 0; i < static_cast<int>(exponents.size()); ++i) index[pack(exponents[i])] = i;
  }

  void emit(std::array<std::uint8_t, Jet::kVars>& e, int var, int left, int degree) {
    if (var == Jet::kVars - 1) {
      e[var] = static_cast<std::uint8_t>(left);
      exponents.push_back(e);
      degree_of.push_back(degree);
      e[var] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = static_cast<std::uint8_t>(k);
      emit(e, var + 1, left - k, degree);
    }
    e[var] = 0;
  }

  int count(int order) const { return offset[order + 1]; }

  static const MonomialTable& get() {
    static const MonomialTable table;
    return table;
  }
};

int checked_order(int order) {
  if (order < 0 || order > Jet::kMaxOrder)
    throw std::invalid_argument("jet order must be in [0, " + std::to_string(Jet::kMaxOrder) +
                                "], got " + std::to_string(order));
  return order;
}

void require_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order())
    throw std::invalid_argument("jet operands must share an order (" +
                                std::to_string(a.order()) + " vs " + std::to_string(b.order()) + ")");
}

}  // namespace

Jet Jet::constant(double value, int order) {
  std::vector<double> c(MonomialTable::get().count(checked_order(order)), 0.0);
  c[0] = value;
  return Jet(order, std::move(c));
}

Jet Jet::variable(double value, int var, int order) {
  if (checked_order(order) < 1) throw std::invalid_argument("variable jet requires order >= 1");
  if (var < 0 || var >= kVars) throw std::invalid_argument("variable index out of range");
  std::vector<double> c(MonomialTable::get().count(order), 0.0);
  c[0] = value;
  c[1 + var] = 1.0;
  return Jet(order, std::move(c));
}

Vec5 Jet::gradient() const {
  if (order_ < 1) throw std::invalid_argument("gradient requires jet order >= 1");
  Vec5 g;
  for (int i = 0; i < kVars; ++i) g[i] = coeffs_[1 + i];
  return g;
}

double Jet::coeff(const std::array<int, kVars>& exponents) const {
  std::array<std::uint8_t, kVars> e{};
  int degree = 0;
  for (int i = 0; i < kVars; ++i) {
    if (exponents[i] < 0) throw std::invalid_argument("negative exponent");
    degree += exponents[i];
    e[i] = static_cast<std::uint8_t>(exponents[i]);
  }
  if (degree > order_) return 0.0;
  return coeffs_[MonomialTable::get().index.at(MonomialTable::pack(e))];
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::invalid_argument("truncation cannot raise jet order");
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + MonomialTable::get().count(order));
  return Jet(order, std::move(c));
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_order(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_order(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  const auto& table = MonomialTable::get();
  const int order = a.order_;
  std::vector<double> c(table.count(order), 0.0);
  for (int i = 0; i < static_cast<int>(a.coeffs_.size()); ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    const auto& ei = table.exponents[i];
    const int jmax = table.count(order - table.degree_of[i]);
    for (int j = 0; j < jmax; ++j) {
      const double bj = b.coeffs_[j];
      if (bj == 0.0) continue;
      std::array<std::uint8_t, Jet::kVars> e = table.exponents[j];
      for (int v = 0; v < Jet::kVars; ++v) e[v] = static_cast<std::uint8_t>(e[v] + ei[v]);
      c[table.index.at(MonomialTable::pack(e))] += ai * bj;
    }
  }
  return Jet(order, std::move(c));
}

Jet Jet::compose(const Jet& j, const std::vector<double>& series) {
  // series[k] is the k-th univariate Taylor coefficient about j.value().
  Jet delta = j;
  delta.coeffs_[0] = 0.0;
  Jet r = Jet::constant(series[j.order_], j.order_);
  for (int k = j.order_ - 1; k >= 0; --k) {
    r = r * delta;
    r.coeffs_[0] += series[k];
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  return a * (1.0 / b);
}

Jet operator/(double a, const Jet& b) {
  const double b0 = b.value();
  if (b0 == 0.0) throw std::domain_error("jet division by a jet with zero value");
  std::vector<double> series(b.order_ + 1);
  double p = 1.0 / b0;
  for (int k = 0; k <= b.order_; ++k) {
    series[k] = p;
    p *= -1.0 / b0;
  }
  Jet r = Jet::compose(b, series);
  return r *= a;
}

Jet sin(const Jet& j) {
  const double s = std::sin(j.value());
  const double c = std::cos(j.value());
  std::vector<double> series(j.order_ + 1);
  double fact = 1.0;
  for (int k = 0; k <= j.order_; ++k) {
    if (k > 0) fact *= k;
    const double d = (k % 4 == 0) ? s : (k % 4 == 1) ? c : (k % 4 == 2) ? -s : -c;
    series[k] = d / fact;
  }
  return Jet::compose(j, series);
}

Jet cos(const Jet& j) {
  const double s = std::sin(j.value());
  const double c = std::cos(j.value());
  std::vector<double> series(j.order_ + 1);
  double fact = 1.0;
  for (int k = 0; k <= j.order_; ++k) {
    if (k > 0) fact *= k;
    const double d = (k % 4 == 0) ? c : (k % 4 == 1) ? -s : (k % 4 == 2) ? -c : s;
    series[k] = d / fact;
  }
  return Jet::compose(j, series);
}

Jet sqrt(const Jet& j) {
  const double v = j.value();
  if (v <= 0.0) throw std::domain_error("jet sqrt requires a positive value part");
  std::vector<double> series(j.order_ + 1);
  series[0] = std::sqrt(v);
  for (int k = 1; k <= j.order_; ++k) series[k] = series[k - 1] * (1.5 - k) / (k * v);
  return Jet::compose(j, series);
}

Jet atan(const Jet& j) {
  // d/dt atan(v + t) = 1 / (1 + (v + t)^2); expand the reciprocal of the
  // quadratic as a power series and integrate coefficient-wise.
  const double v = j.value();
  const int n = j.order_;
  const double q0 = 1.0 + v * v, q1 = 2.0 * v;
  std::vector<double> recip(std::max(n, 1));
  recip[0] = 1.0 / q0;
  for (int k = 1; k < static_cast<int>(recip.size()); ++k) {
    double acc = q1 * recip[k - 1];
    if (k >= 2) acc += recip[k - 2];
    recip[k] = -acc / q0;
  }
  std::vector<double> series(n + 1);
  series[0] = std::atan(v);
  for (int k = 1; k <= n; ++k) series[k] = recip[k - 1] / k;
  return Jet::compose(j, series);
}

Jet atan2(const Jet& y, const Jet& x) {
  const double x0 = x.value(), y0 = y.value();
  if (x0 == 0.0 && y0 == 0.0) throw std::domain_error("jet atan2 undefined at the origin");
  // Branch on the larger value part; both forms share the atan2 gradient
  // field, the constant offset comes from the order-0 quadrant.
  if (std::abs(x0) >= std::abs(y0)) {
    Jet r = atan(y / x);
    if (x0 < 0.0) r += (y0 >= 0.0) ? M_PI : -M_PI;
    return r;
  }
  Jet r = -atan(x / y);
  r += (y0 > 0.0) ? M_PI / 2 : -M_PI / 2;
  return r;
}

Jet partial(const Jet& j, int var) {
  if (j.order_ < 1)
    throw std::invalid_argument("partial derivative of an order-0 jet; raise the seed order");
  if (var < 0 || var >= Jet::kVars) throw std::invalid_argument("variable index out of range");
  const auto& table = MonomialTable::get();
  const int order = j.order_ - 1;
  std::vector<double> c(table.count(order), 0.0);
  for (int i = 1; i < static_cast<int>(j.coeffs_.size()); ++i) {
    const auto& e = table.exponents[i];
    if (e[var] == 0 || j.coeffs_[i] == 0.0) continue;
    std::array<std::uint8_t, Jet::kVars> d = e;
    d[var] = static_cast<std::uint8_t>(d[var] - 1);
    c[table.index.at(MonomialTable::pack(d))] += e[var] * j.coeffs_[i];
  }
  return Jet(order, std::move(c));
}

JetVector seed(const State5& x, int order) {
  JetVector v;
  for (int i = 0; i < Jet::kVars; ++i) v[i] = Jet::variable(x[i], i, order);
  return v;
}

Jet lie(const Jet& g, const JetVector& f) {
  if (g.order() < 1)
    throw std::runtime_error(
        "Lie derivative exhausted the jet order; re-seed with a higher order");
  const int order = g.order() - 1;
  for (const Jet& fi : f)
    if (fi.order() < order)
      throw std::runtime_error(
          "vector field jet order too low for this Lie depth; re-seed with a higher order");
  Jet acc = Jet::constant(0.0, order);
  for (int i = 0; i < Jet::kVars; ++i) acc += partial(g, i) * f[i].truncated(order);
  return acc;
}

}  // namespace obs_scout
