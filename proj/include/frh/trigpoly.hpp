#pragma once

#include <functional>
#include <map>
#include <utility>

namespace frh {

// Exact finite trigonometric polynomial over rational wavenumbers.
// Keys are 6 * wavenumber so halves ({0, 1/2, 1}) and thirds ({1/3, 1})
// stay exact integers under products.
class TrigPoly {
 public:
  static constexpr int kKeyDen = 6;

  // coefficient pair (cos, sin) per key
  using Terms = std::map<int, std::pair<double, double>>;

  TrigPoly() = default;

  // Folds negative keys (cos even, sin odd) and drops sin at key 0.
  void add_term(int key6, double cos_c, double sin_c);

  double cos_coeff(int key6) const;
  double sin_coeff(int key6) const;

  TrigPoly& operator+=(const TrigPoly& rhs);
  TrigPoly& operator*=(double s);
  friend TrigPoly operator*(const TrigPoly& lhs, const TrigPoly& rhs);

  double eval(double x) const;
  double max_abs_coeff() const;
  bool supported_only_on(int key6) const;  // ignoring ~0 coefficients

  // Applies sum over harmonics of  mult(k) * d/dx  to each component:
  //   A cos(kx) + B sin(kx)  ->  mult(k) * k * (B cos(kx) - A sin(kx)).
  TrigPoly map_first_derivative(
      const std::function<double(double)>& mult) const;

  void prune(double abs_tol);
  const Terms& terms() const { return terms_; }

 private:
  Terms terms_;
};

// A trig polynomial with an explicit log-magnitude carried separately, so
// iterates far outside double range remain representable.
struct ScaledTrigPoly {
  TrigPoly poly;
  double log_scale = 0.0;  // represented value = poly * exp(log_scale)

  // Pull the max-abs coefficient into log_scale, leaving max |coeff| = 1.
  void normalize();
  double log_abs_coeff(bool cos_part, int key6) const;
};

}  // namespace frh
