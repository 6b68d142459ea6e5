#include "frh/trigpoly.hpp"

#include <cmath>
#include <cstdlib>

namespace frh {

void TrigPoly::add_term(int key6, double cos_c, double sin_c) {
  if (key6 < 0) {
    key6 = -key6;
    sin_c = -sin_c;
  }
  if (key6 == 0) sin_c = 0.0;
  if (cos_c == 0.0 && sin_c == 0.0) return;
  auto& t = terms_[key6];
  t.first += cos_c;
  t.second += sin_c;
}

double TrigPoly::cos_coeff(int key6) const {
  auto it = terms_.find(std::abs(key6));
  return it == terms_.end() ? 0.0 : it->second.first;
}

double TrigPoly::sin_coeff(int key6) const {
  auto it = terms_.find(std::abs(key6));
  double v = it == terms_.end() ? 0.0 : it->second.second;
  return key6 < 0 ? -v : v;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& rhs) {
  for (const auto& [k, cs] : rhs.terms_) add_term(k, cs.first, cs.second);
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  for (auto& [k, cs] : terms_) {
    cs.first *= s;
    cs.second *= s;
  }
  return *this;
}

TrigPoly operator*(const TrigPoly& lhs, const TrigPoly& rhs) {
  TrigPoly out;
  for (const auto& [k1, t1] : lhs.terms_) {
    for (const auto& [k2, t2] : rhs.terms_) {
      int kd = k1 - k2;
      int ks = k1 + k2;
      double A1 = t1.first, B1 = t1.second;
      double A2 = t2.first, B2 = t2.second;
      // product-to-sum identities
      out.add_term(kd, 0.5 * A1 * A2, 0.0);
      out.add_term(ks, 0.5 * A1 * A2, 0.0);
      out.add_term(ks, 0.0, 0.5 * A1 * B2);
      out.add_term(kd, 0.0, -0.5 * A1 * B2);
      out.add_term(ks, 0.0, 0.5 * B1 * A2);
      out.add_term(kd, 0.0, 0.5 * B1 * A2);
      out.add_term(kd, 0.5 * B1 * B2, 0.0);
      out.add_term(ks, -0.5 * B1 * B2, 0.0);
    }
  }
  return out;
}

double TrigPoly::eval(double x) const {
  double s = 0.0;
  for (const auto& [k, cs] : terms_) {
    double kx = x * static_cast<double>(k) / kKeyDen;
    s += cs.first * std::cos(kx) + cs.second * std::sin(kx);
  }
  return s;
}

double TrigPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, cs] : terms_) {
    m = std::max({m, std::abs(cs.first), std::abs(cs.second)});
  }
  return m;
}

bool TrigPoly::supported_only_on(int key6) const {
  double m = max_abs_coeff();
  for (const auto& [k, cs] : terms_) {
    if (k == key6) continue;
    if (std::abs(cs.first) > 1e-14 * m || std::abs(cs.second) > 1e-14 * m)
      return false;
  }
  return true;
}

TrigPoly TrigPoly::map_first_derivative(
    const std::function<double(double)>& mult) const {
  TrigPoly out;
  for (const auto& [k, cs] : terms_) {
    double kk = static_cast<double>(k) / kKeyDen;
    double f = mult(kk) * kk;
    if (f == 0.0) continue;
    out.add_term(k, f * cs.second, -f * cs.first);
  }
  return out;
}

void TrigPoly::prune(double abs_tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second.first) <= abs_tol &&
        std::abs(it->second.second) <= abs_tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

void ScaledTrigPoly::normalize() {
  double m = poly.max_abs_coeff();
  if (m > 0.0 && std::isfinite(m)) {
    poly *= 1.0 / m;
    log_scale += std::log(m);
  }
}

double ScaledTrigPoly::log_abs_coeff(bool cos_part, int key6) const {
  double c = cos_part ? poly.cos_coeff(key6) : poly.sin_coeff(key6);
  return std::log(std::abs(c)) + log_scale;
}

}  // namespace frh
