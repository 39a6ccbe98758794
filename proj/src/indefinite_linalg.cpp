#include "quasimin/indefinite_linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "quasimin/error.hpp"

namespace quasimin {

IndefiniteSpace::IndefiniteSpace(int dim, int index) : dim_(dim), index_(index) {
  if (dim < 1 || dim > kMaxDim || index < 0 || index > dim) {
    throw Error(ErrorKind::InvalidArgument,
                "IndefiniteSpace: need 1 <= dim <= " + std::to_string(kMaxDim) + " and 0 <= index <= dim");
  }
}

Vec::Vec(IndefiniteSpace space) : space_(space) {}

Vec::Vec(IndefiniteSpace space, std::initializer_list<double> coords)
    : Vec(space, std::span<const double>(coords.begin(), coords.size())) {}

Vec::Vec(IndefiniteSpace space, std::span<const double> coords) : space_(space) {
  if (coords.size() != static_cast<std::size_t>(space.dim())) {
    throw Error(ErrorKind::DimensionMismatch, "Vec: component count " + std::to_string(coords.size()) +
                                                  " != space dimension " + std::to_string(space.dim()));
  }
  std::copy(coords.begin(), coords.end(), c_.begin());
}

namespace {

void require_same_space(const Vec& a, const Vec& b) {
  if (!(a.space() == b.space())) {
    throw Error(ErrorKind::DimensionMismatch, "vectors live in different spaces");
  }
}

}  // namespace

Vec& Vec::operator+=(const Vec& o) {
  require_same_space(*this, o);
  for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_space(*this, o);
  for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Vec& Vec::operator*=(double a) noexcept {
  for (int i = 0; i < size(); ++i) c_[i] *= a;
  return *this;
}

Vec& Vec::operator/=(double a) noexcept {
  for (int i = 0; i < size(); ++i) c_[i] /= a;
  return *this;
}

double Vec::euclidean_norm2() const noexcept {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += c_[i] * c_[i];
  return s;
}

double Vec::euclidean_norm() const noexcept { return std::sqrt(euclidean_norm2()); }

double Vec::max_abs() const noexcept {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

bool Vec::all_finite() const noexcept {
  for (int i = 0; i < size(); ++i)
    if (!std::isfinite(c_[i])) return false;
  return true;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator-(Vec a) { return a *= -1.0; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }
Vec operator/(Vec a, double s) { return a /= s; }

double inner(const Vec& u, const Vec& v) {
  require_same_space(u, v);
  const int s = u.space().index();
  double neg = 0.0, pos = 0.0;
  for (int i = 0; i < s; ++i) neg += u[i] * v[i];
  for (int i = s; i < u.size(); ++i) pos += u[i] * v[i];
  return pos - neg;
}

const char* to_string(CausalCharacter c) noexcept {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Zero: return "zero";
  }
  return "unknown";
}

CausalCharacter causal_character(const Vec& v, double tol) {
  if (v.max_abs() <= tol) return CausalCharacter::Zero;
  const double q = inner(v, v);
  if (std::abs(q) <= tol * v.euclidean_norm2()) return CausalCharacter::Lightlike;
  return q > 0.0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

std::vector<std::vector<double>> kernel(const std::vector<std::vector<double>>& rows, std::size_t k,
                                        double rel_tol, double abs_tol) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "kernel: zero-dimensional domain");
  for (const auto& r : rows) {
    if (r.size() != k) throw Error(ErrorKind::DimensionMismatch, "kernel: rows of unequal length");
  }
  const auto n = static_cast<Eigen::Index>(k);
  if (rows.empty()) {
    std::vector<std::vector<double>> basis(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) basis[i][i] = 1.0;
    return basis;
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * smax && sv(i) > abs_tol) ++rank;
  }

  std::vector<std::vector<double>> basis;
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index c = rank; c < n; ++c) {
    std::vector<double> b(k);
    for (Eigen::Index j = 0; j < n; ++j) b[static_cast<std::size_t>(j)] = v(j, c);
    basis.push_back(std::move(b));
  }
  return basis;
}

std::vector<double> gram_coefficients(const Vec& v, std::span<const Vec> spanning) {
  const auto n = static_cast<Eigen::Index>(spanning.size());
  if (n == 0) return {};
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& wi = spanning[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = inner(wi, spanning[static_cast<std::size_t>(j)]);
    rhs(i) = inner(v, wi);
    scale = std::max(scale, wi.euclidean_norm2());
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  // |det| relative to the product of squared lengths; n <= 3 here.
  if (std::abs(lu.determinant()) <= 1e-13 * std::pow(scale, static_cast<double>(n))) {
    throw Error(ErrorKind::DegeneratePlane, "degenerate Gram matrix");
  }
  const Eigen::VectorXd c = lu.solve(rhs);
  return {c.data(), c.data() + n};
}

Vec project_out(const Vec& v, std::span<const Vec> spanning) {
  const auto c = gram_coefficients(v, spanning);
  Vec out = v;
  for (std::size_t j = 0; j < spanning.size(); ++j) out -= c[j] * spanning[j];
  return out;
}

std::vector<Vec> orthogonal_complement(std::span<const Vec> spanning, double rel_tol) {
  if (spanning.empty()) throw Error(ErrorKind::InvalidArgument, "orthogonal_complement: empty spanning set");
  const IndefiniteSpace space = spanning.front().space();
  std::vector<std::vector<double>> rows;
  for (const auto& w : spanning) {
    std::vector<double> r(static_cast<std::size_t>(space.dim()));
    for (int i = 0; i < space.dim(); ++i) r[static_cast<std::size_t>(i)] = space.sign(i) * w[i];
    rows.push_back(std::move(r));
  }
  std::vector<Vec> out;
  for (const auto& b : kernel(rows, static_cast<std::size_t>(space.dim()), rel_tol)) out.emplace_back(space, b);
  return out;
}

Vec lightlike_partner(const Vec& n1, std::span<const Vec> plane, double tol) {
  if (plane.size() != 2) throw Error(ErrorKind::InvalidArgument, "lightlike_partner: plane needs two spanning vectors");
  if (causal_character(n1, tol) != CausalCharacter::Lightlike) {
    throw Error(ErrorKind::NotLightlike, "lightlike_partner: n1 is not lightlike");
  }

  // n1 must lie in the plane (Euclidean least squares).
  const int dim = n1.size();
  Eigen::MatrixXd p(dim, 2);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) {
    p(i, 0) = plane[0][i];
    p(i, 1) = plane[1][i];
    x(i) = n1[i];
  }
  const Eigen::VectorXd coef = p.colPivHouseholderQr().solve(x);
  if ((p * coef - x).norm() > 1e-6 * x.norm()) {
    throw Error(ErrorKind::DegeneratePlane, "lightlike_partner: n1 is not contained in the plane");
  }

  // Pick the spanning vector pairing most strongly with n1.
  const Vec* w = nullptr;
  double best = 0.0;
  for (const auto& u : plane) {
    const double pr = std::abs(inner(n1, u)) / u.euclidean_norm();
    if (pr > best) {
      best = pr;
      w = &u;
    }
  }
  if (w == nullptr || best <= tol * n1.euclidean_norm()) {
    throw Error(ErrorKind::DegeneratePlane, "lightlike_partner: plane has no second null direction");
  }

  // n2 = lambda (w + mu n1) with <n2,n2> = 0 and <n1,n2> = -1.
  const double nw = inner(n1, *w);
  const double mu = -inner(*w, *w) / (2.0 * nw);
  const double lambda = -1.0 / nw;
  return lambda * (*w + mu * n1);
}

}  // namespace quasimin
