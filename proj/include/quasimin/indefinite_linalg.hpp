#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace quasimin {

inline constexpr int kMaxDim = 5;

/// Flat space E^n_s: coordinates 0..s-1 pair with -1, the rest with +1.
class IndefiniteSpace {
 public:
  IndefiniteSpace(int dim, int index);

  int dim() const noexcept { return dim_; }
  int index() const noexcept { return index_; }
  double sign(int i) const noexcept { return i < index_ ? -1.0 : 1.0; }

  friend bool operator==(const IndefiniteSpace&, const IndefiniteSpace&) = default;

 private:
  int dim_;
  int index_;
};

/// Fixed-capacity vector tagged with the space it lives in.
class Vec {
 public:
  explicit Vec(IndefiniteSpace space);
  Vec(IndefiniteSpace space, std::initializer_list<double> coords);
  Vec(IndefiniteSpace space, std::span<const double> coords);

  const IndefiniteSpace& space() const noexcept { return space_; }
  int size() const noexcept { return space_.dim(); }

  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  std::span<const double> coords() const noexcept {
    return {c_.data(), static_cast<std::size_t>(space_.dim())};
  }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double a) noexcept;
  Vec& operator/=(double a) noexcept;

  double euclidean_norm2() const noexcept;
  double euclidean_norm() const noexcept;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

 private:
  IndefiniteSpace space_;
  std::array<double, kMaxDim> c_{};
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator-(Vec a);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);
Vec operator/(Vec a, double s);

/// -sum_{i<s} u_i v_i + sum_{i>=s} u_i v_i. Throws DimensionMismatch.
double inner(const Vec& u, const Vec& v);

enum class CausalCharacter { Spacelike, Timelike, Lightlike, Zero };

const char* to_string(CausalCharacter c) noexcept;

inline constexpr double kDefaultLightlikeTol = 1e-8;

/// Zero if max|v_i| <= tol; Lightlike if |<v,v>| <= tol * |v|_E^2; otherwise by sign.
CausalCharacter causal_character(const Vec& v, double tol = kDefaultLightlikeTol);

inline constexpr double kDefaultRankTol = 1e-8;

/// Euclidean-orthonormal basis of {x in R^k : row . x = 0 for all rows}.
/// A singular value counts toward the rank when it exceeds both
/// rel_tol * sigma_max and abs_tol. An empty row set yields the standard basis.
std::vector<std::vector<double>> kernel(const std::vector<std::vector<double>>& rows, std::size_t k,
                                        double rel_tol = kDefaultRankTol, double abs_tol = 0.0);

/// Gram-system coefficients c with v - sum c_j w_j orthogonal to every w_j
/// under the indefinite product. Throws DegeneratePlane for a singular Gram matrix.
std::vector<double> gram_coefficients(const Vec& v, std::span<const Vec> spanning);

/// v minus its component in span(spanning), using gram_coefficients.
Vec project_out(const Vec& v, std::span<const Vec> spanning);

/// Basis of the indefinite orthogonal complement of `spanning` (Euclidean-orthonormal).
std::vector<Vec> orthogonal_complement(std::span<const Vec> spanning, double rel_tol = kDefaultRankTol);

/// The lightlike n2 in span(plane) with <n1,n2> = -1, for lightlike n1 in a
/// (1,1) plane. Throws NotLightlike or DegeneratePlane.
Vec lightlike_partner(const Vec& n1, std::span<const Vec> plane, double tol = kDefaultLightlikeTol);

}  // namespace quasimin
