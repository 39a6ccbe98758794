#pragma once

#include "quasimin/indefinite_linalg.hpp"

namespace quasimin {

/// R^4_2(c) for c in {-1, 0, 1}: E^4_2 itself, or the quadric <x,x> = c in
/// E^5_2 (c = 1) or E^5_3 (c = -1).
class SpaceForm {
 public:
  explicit SpaceForm(int c);

  static SpaceForm flat() { return SpaceForm(0); }
  static SpaceForm pseudo_sphere() { return SpaceForm(1); }
  static SpaceForm pseudo_hyperbolic() { return SpaceForm(-1); }

  int curvature() const noexcept { return c_; }
  const IndefiniteSpace& ambient() const noexcept { return ambient_; }
  bool is_quadric() const noexcept { return c_ != 0; }
  /// Target value of <x,x>; meaningful only for quadrics.
  double target() const noexcept { return static_cast<double>(c_); }

  const char* name() const noexcept;

 private:
  int c_;
  IndefiniteSpace ambient_;
};

inline constexpr double kConstraintDriftTol = 1e-9;

/// |<x,x> - c|, or 0 for the flat form.
double form_residual(const Vec& x, const SpaceForm& form);

bool on_form(const Vec& x, const SpaceForm& form, double tol = kConstraintDriftTol);

/// A point of a quadric space form (position vector f^ in the flat ambient).
class AmbientPoint {
 public:
  AmbientPoint(Vec x, SpaceForm form, double tol = kConstraintDriftTol);

  const Vec& x() const noexcept { return x_; }
  const SpaceForm& form() const noexcept { return form_; }

 private:
  Vec x_;
  SpaceForm form_;
};

/// Second fundamental form of f in the quadric from that of f^ = i o f in the
/// flat ambient: alpha_f = alpha_hat + c g(X,Y) f^.
Vec intrinsic_second_fundamental_form(const Vec& alpha_hat, double g_xy, const AmbientPoint& fhat);

}  // namespace quasimin
