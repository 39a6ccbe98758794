#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "quasimin/indefinite_linalg.hpp"

namespace quasimin {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// Smooth real function of one variable. Optionally carries closed forms for
/// its first few derivatives; higher orders fall back to 4th-order central
/// differences of the highest known one.
class ScalarFn1 {
 public:
  using Fn = std::function<double(double)>;

  ScalarFn1() = default;
  explicit ScalarFn1(Fn f, Interval domain = {});
  explicit ScalarFn1(std::vector<Fn> derivatives, Interval domain = {});

  static ScalarFn1 constant(double c);

  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;

  /// Highest derivative order available in closed form.
  int known_order() const noexcept { return static_cast<int>(d_.size()) - 1; }
  const Interval& domain() const noexcept { return domain_; }
  bool empty() const noexcept { return d_.empty(); }

 private:
  std::vector<Fn> d_;
  Interval domain_;
};

/// Uniform node set of step h anchored at `origin`, covering [lo, hi].
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  double h = 1e-3;
};

inline constexpr double kDefaultOdeStep = 1e-3;

/// Node values and derivatives on a uniform grid with C^1 cubic Hermite
/// interpolation between nodes.
class HermiteTable {
 public:
  HermiteTable(double origin, double h, std::vector<double> values, std::vector<double> slopes);

  double value(double t) const;
  double slope(double t) const;

  double first_node() const noexcept { return origin_; }
  double last_node() const noexcept { return origin_ + h_ * static_cast<double>(values_.size() - 1); }
  double step() const noexcept { return h_; }
  std::size_t size() const noexcept { return values_.size(); }
  double node(std::size_t i) const noexcept { return origin_ + h_ * static_cast<double>(i); }
  double node_value(std::size_t i) const { return values_[i]; }
  double node_slope(std::size_t i) const { return slopes_[i]; }

 private:
  std::size_t locate(double t, double& u) const;

  double origin_;
  double h_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Dense solution of b'' = sigma b + rhs(t). b() carries b, b', b'' (the
/// latter recovered from the equation) and b''' when rhs is differentiable.
class OdeSolution {
 public:
  OdeSolution(int sigma, ScalarFn1 rhs, std::shared_ptr<const HermiteTable> b,
              std::shared_ptr<const HermiteTable> db);

  const ScalarFn1& b() const noexcept { return fn_; }
  int sigma() const noexcept { return sigma_; }
  const HermiteTable& table() const noexcept { return *b_; }

  /// max |b'' - sigma b - rhs| at the nodes, with b'' differentiated from the
  /// dense derivative table (independent of the recovered b'').
  double max_node_residual() const;

 private:
  int sigma_;
  ScalarFn1 rhs_;
  std::shared_ptr<const HermiteTable> b_;
  std::shared_ptr<const HermiteTable> db_;
  ScalarFn1 fn_;
};

/// Classical RK4 for b'' = sigma b + rhs with b(t0) = b0, b'(t0) = db0.
/// The node set is t0 + k h and extends in both directions to cover [grid.lo, grid.hi].
OdeSolution solve_lode2(int sigma, const ScalarFn1& rhs, double t0, double b0, double db0, const GridSpec& grid);

/// t -> int_{t0}^t g, composite Simpson per interval (midpoint samples) with
/// Hermite dense output; derivatives delegate to g.
ScalarFn1 cumulative_integral(const ScalarFn1& g, double t0, const GridSpec& grid);

struct ChartPoint {
  double s = 0.0;
  double t = 0.0;
};

using ChartMap = std::function<Vec(double s, double t)>;

struct Partials {
  Vec f;
  Vec fs;
  Vec ft;
  std::optional<Vec> fss;
  std::optional<Vec> fst;
  std::optional<Vec> ftt;
};

/// eps^(1/6) * max(1, |x|), rounded so that x + h is exact.
double fd_step(double x) noexcept;

/// 4th-order central differences of a chart map (order 1 or 2).
Partials partial_derivs(const ChartMap& f, ChartPoint p, int order);

/// 4th-order central first and second derivatives of a scalar function at a given step.
double central_d1(const std::function<double(double)>& g, double t, double h);
double central_d2(const std::function<double(double)>& g, double t, double h);

/// Same stencils for vector-valued functions.
Vec central_d1(const std::function<Vec(double)>& g, double t, double h);
Vec central_d2(const std::function<Vec(double)>& g, double t, double h);

}  // namespace quasimin
