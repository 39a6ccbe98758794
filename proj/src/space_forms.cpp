#include "quasimin/space_forms.hpp"

#include <cmath>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

IndefiniteSpace ambient_for(int c) {
  switch (c) {
    case 0: return {4, 2};
    case 1: return {5, 2};
    case -1: return {5, 3};
    default: throw Error(ErrorKind::InvalidArgument, "SpaceForm: curvature must be -1, 0 or 1");
  }
}

}  // namespace

SpaceForm::SpaceForm(int c) : c_(c), ambient_(ambient_for(c)) {}

const char* SpaceForm::name() const noexcept {
  switch (c_) {
    case 0: return "E4_2";
    case 1: return "S4_2";
    default: return "H4_2";
  }
}

double form_residual(const Vec& x, const SpaceForm& form) {
  if (!(x.space() == form.ambient())) throw Error(ErrorKind::DimensionMismatch, "point not in the form's ambient space");
  if (!form.is_quadric()) return 0.0;
  return std::abs(inner(x, x) - form.target());
}

bool on_form(const Vec& x, const SpaceForm& form, double tol) { return form_residual(x, form) <= tol; }

AmbientPoint::AmbientPoint(Vec x, SpaceForm form, double tol) : x_(std::move(x)), form_(form) {
  if (!on_form(x_, form_, tol)) {
    throw Error(ErrorKind::NotOnForm, std::string("point violates the ") + form_.name() + " constraint");
  }
}

Vec intrinsic_second_fundamental_form(const Vec& alpha_hat, double g_xy, const AmbientPoint& fhat) {
  return alpha_hat + (fhat.form().target() * g_xy) * fhat.x();
}

}  // namespace quasimin
