#include "quasimin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

std::string where(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

// Weights of the 4th-order central stencils at offsets -2..2.
constexpr double kD1[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double kD2[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

}  // namespace

// ---------------------------------------------------------------------------
// ScalarFn1

ScalarFn1::ScalarFn1(Fn f, Interval domain) : d_{std::move(f)}, domain_(domain) {
  if (!d_.front()) throw Error(ErrorKind::InvalidArgument, "ScalarFn1: empty callable");
}

ScalarFn1::ScalarFn1(std::vector<Fn> derivatives, Interval domain) : d_(std::move(derivatives)), domain_(domain) {
  if (d_.empty()) throw Error(ErrorKind::InvalidArgument, "ScalarFn1: no callable given");
  for (const auto& f : d_)
    if (!f) throw Error(ErrorKind::InvalidArgument, "ScalarFn1: empty callable");
}

ScalarFn1 ScalarFn1::constant(double c) {
  return ScalarFn1({[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; },
                    [](double) { return 0.0; }});
}

double ScalarFn1::derivative(double t, int order) const {
  if (d_.empty()) throw Error(ErrorKind::EvaluationFailure, "ScalarFn1: empty function");
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "ScalarFn1: negative derivative order");
  if (!domain_.contains(t)) {
    throw Error(ErrorKind::EvaluationFailure, "ScalarFn1: t=" + where(t) + " outside the declared domain");
  }
  const int known = known_order();
  if (order <= known) return d_[static_cast<std::size_t>(order)](t);

  const auto& top = d_.back();
  const int extra = order - known;
  const double h = fd_step(t);
  if (extra == 1) return central_d1(top, t, h);
  if (extra == 2) return central_d2(top, t, h);
  // Higher orders: differentiate the (order-1) derivative once more with a wider step.
  const double h2 = 4.0 * h;
  return central_d1([this, order](double x) { return derivative(x, order - 1); }, t, h2);
}

// ---------------------------------------------------------------------------
// Finite differences

double fd_step(double x) noexcept {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0);
  const double h = base * std::max(1.0, std::abs(x));
  volatile double xh = x + h;
  return xh - x;
}

double central_d1(const std::function<double(double)>& g, double t, double h) {
  double acc = 0.0;
  for (int k = -2; k <= 2; ++k) {
    if (k != 0) acc += kD1[k + 2] * g(t + k * h);
  }
  return acc / h;
}

double central_d2(const std::function<double(double)>& g, double t, double h) {
  double acc = 0.0;
  for (int k = -2; k <= 2; ++k) acc += kD2[k + 2] * g(t + k * h);
  return acc / (h * h);
}

Vec central_d1(const std::function<Vec(double)>& g, double t, double h) {
  Vec acc = g(t + h) * kD1[3];
  acc += g(t - h) * kD1[1];
  acc += g(t + 2 * h) * kD1[4];
  acc += g(t - 2 * h) * kD1[0];
  return acc / h;
}

Vec central_d2(const std::function<Vec(double)>& g, double t, double h) {
  Vec acc = g(t) * kD2[2];
  for (int k : {-2, -1, 1, 2}) acc += g(t + k * h) * kD2[k + 2];
  return acc / (h * h);
}

Partials partial_derivs(const ChartMap& f, ChartPoint p, int order) {
  if (order != 1 && order != 2) throw Error(ErrorKind::InvalidArgument, "partial_derivs: order must be 1 or 2");
  const double hs = fd_step(p.s);
  const double ht = fd_step(p.t);

  auto eval = [&](double s, double t) {
    Vec v = [&] {
      try {
        return f(s, t);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(ErrorKind::EvaluationFailure, std::string("chart map failed inside stencil: ") + e.what());
      }
    }();
    if (!v.all_finite()) {
      throw Error(ErrorKind::EvaluationFailure,
                  "chart map not finite at (" + where(s) + ", " + where(t) + ") inside stencil");
    }
    return v;
  };

  const Vec f0 = eval(p.s, p.t);
  std::vector<Vec> along_s, along_t;  // offsets -2, -1, 1, 2
  for (int k : {-2, -1, 1, 2}) {
    along_s.push_back(eval(p.s + k * hs, p.t));
    along_t.push_back(eval(p.s, p.t + k * ht));
  }
  auto d1 = [](const std::vector<Vec>& v, double h) {
    return (kD1[0] * v[0] + kD1[1] * v[1] + kD1[3] * v[2] + kD1[4] * v[3]) / h;
  };
  auto d2 = [](const Vec& c, const std::vector<Vec>& v, double h) {
    return (kD2[0] * v[0] + kD2[1] * v[1] + kD2[2] * c + kD2[3] * v[2] + kD2[4] * v[3]) / (h * h);
  };

  Partials out{f0, d1(along_s, hs), d1(along_t, ht), std::nullopt, std::nullopt, std::nullopt};
  if (order == 2) {
    out.fss = d2(f0, along_s, hs);
    out.ftt = d2(f0, along_t, ht);
    Vec mixed(f0.space());
    for (int i = -2; i <= 2; ++i) {
      if (i == 0) continue;
      for (int j = -2; j <= 2; ++j) {
        if (j == 0) continue;
        mixed += (kD1[i + 2] * kD1[j + 2]) * eval(p.s + i * hs, p.t + j * ht);
      }
    }
    out.fst = mixed / (hs * ht);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermite tables

HermiteTable::HermiteTable(double origin, double h, std::vector<double> values, std::vector<double> slopes)
    : origin_(origin), h_(h), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (!(h_ > 0.0) || values_.size() < 2 || values_.size() != slopes_.size()) {
    throw Error(ErrorKind::InvalidArgument, "HermiteTable: need h > 0 and at least two matching nodes");
  }
}

std::size_t HermiteTable::locate(double t, double& u) const {
  const double span = h_ * static_cast<double>(values_.size() - 1);
  const double x = t - origin_;
  const double slack = 1e-9 * h_;
  if (!(x >= -slack && x <= span + slack)) {
    throw Error(ErrorKind::EvaluationFailure, "t=" + where(t) + " outside the tabulated span [" + where(origin_) +
                                                  ", " + where(origin_ + span) + "]");
  }
  auto i = static_cast<std::size_t>(std::clamp(std::floor(x / h_), 0.0, static_cast<double>(values_.size() - 2)));
  u = (x - h_ * static_cast<double>(i)) / h_;
  return i;
}

double HermiteTable::value(double t) const {
  double u = 0.0;
  const std::size_t i = locate(t, u);
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * values_[i] + (u3 - 2 * u2 + u) * h_ * slopes_[i] + (-2 * u3 + 3 * u2) * values_[i + 1] +
         (u3 - u2) * h_ * slopes_[i + 1];
}

double HermiteTable::slope(double t) const {
  double u = 0.0;
  const std::size_t i = locate(t, u);
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * values_[i] + (3 * u2 - 4 * u + 1) * h_ * slopes_[i] + (-6 * u2 + 6 * u) * values_[i + 1] +
          (3 * u2 - 2 * u) * h_ * slopes_[i + 1]) /
         h_;
}

// ---------------------------------------------------------------------------
// ODE

namespace {

struct NodeRange {
  long kmin;
  long kmax;
};

NodeRange node_range(double t0, const GridSpec& grid) {
  if (!(grid.h > 0.0) || !(grid.hi >= grid.lo)) {
    throw Error(ErrorKind::InvalidArgument, "GridSpec: need h > 0 and hi >= lo");
  }
  const double lo = std::min(grid.lo, t0);
  const double hi = std::max(grid.hi, t0);
  NodeRange r{static_cast<long>(std::floor((lo - t0) / grid.h - 1e-9)),
              static_cast<long>(std::ceil((hi - t0) / grid.h + 1e-9))};
  if (r.kmax - r.kmin < 1) r.kmax = r.kmin + 1;
  return r;
}

double checked(double v, double t, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::EvaluationFailure, std::string(what) + " not finite at t=" + where(t));
  return v;
}

}  // namespace

OdeSolution::OdeSolution(int sigma, ScalarFn1 rhs, std::shared_ptr<const HermiteTable> b,
                         std::shared_ptr<const HermiteTable> db)
    : sigma_(sigma), rhs_(std::move(rhs)), b_(std::move(b)), db_(std::move(db)) {
  const Interval dom{b_->first_node(), b_->last_node()};
  auto bt = b_;
  auto dbt = db_;
  const double sg = sigma_;
  ScalarFn1 r = rhs_;
  fn_ = ScalarFn1({[bt](double t) { return bt->value(t); }, [dbt](double t) { return dbt->value(t); },
                   [bt, sg, r](double t) { return sg * bt->value(t) + r(t); },
                   [dbt, sg, r](double t) { return sg * dbt->value(t) + r.derivative(t, 1); }},
                  dom);
}

double OdeSolution::max_node_residual() const {
  double worst = 0.0;
  const std::size_t n = db_->size();
  const double h = db_->step();
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double d2 = (db_->node_value(k - 2) - 8.0 * db_->node_value(k - 1) + 8.0 * db_->node_value(k + 1) -
                       db_->node_value(k + 2)) /
                      (12.0 * h);
    const double t = db_->node(k);
    worst = std::max(worst, std::abs(d2 - sigma_ * b_->node_value(k) - rhs_(t)));
  }
  return worst;
}

OdeSolution solve_lode2(int sigma, const ScalarFn1& rhs, double t0, double b0, double db0, const GridSpec& grid) {
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::InvalidArgument, "solve_lode2: sigma must be +1 or -1");
  const NodeRange r = node_range(t0, grid);
  const std::size_t n = static_cast<std::size_t>(r.kmax - r.kmin + 1);
  const std::size_t i0 = static_cast<std::size_t>(-r.kmin);
  std::vector<double> b(n), db(n), d2b(n);

  auto accel = [&](double t, double y) { return sigma * y + checked(rhs(t), t, "rhs"); };

  auto integrate = [&](long dir) {
    const double h = dir * grid.h;
    std::size_t i = i0;
    while (true) {
      const long next = static_cast<long>(i) + dir;
      if (next < 0 || next >= static_cast<long>(n)) break;
      const double t = t0 + (static_cast<double>(i) - static_cast<double>(i0)) * grid.h;
      const double y = b[i], v = db[i];
      const double k1y = v, k1v = accel(t, y);
      const double k2y = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, y + 0.5 * h * k1y);
      const double k3y = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, y + 0.5 * h * k2y);
      const double k4y = v + h * k3v, k4v = accel(t + h, y + h * k3y);
      const auto j = static_cast<std::size_t>(next);
      b[j] = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      db[j] = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      i = j;
    }
  };

  b[i0] = b0;
  db[i0] = db0;
  integrate(+1);
  integrate(-1);

  const double origin = t0 + static_cast<double>(r.kmin) * grid.h;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = origin + static_cast<double>(k) * grid.h;
    d2b[k] = accel(t, b[k]);
  }
  auto bt = std::make_shared<const HermiteTable>(origin, grid.h, b, db);
  auto dbt = std::make_shared<const HermiteTable>(origin, grid.h, db, std::move(d2b));
  return OdeSolution(sigma, rhs, std::move(bt), std::move(dbt));
}

ScalarFn1 cumulative_integral(const ScalarFn1& g, double t0, const GridSpec& grid) {
  const NodeRange r = node_range(t0, grid);
  const std::size_t n = static_cast<std::size_t>(r.kmax - r.kmin + 1);
  const std::size_t i0 = static_cast<std::size_t>(-r.kmin);
  const double origin = t0 + static_cast<double>(r.kmin) * grid.h;
  const double h = grid.h;

  std::vector<double> gv(n), integral(n, 0.0);
  auto node = [&](std::size_t k) { return origin + static_cast<double>(k) * h; };
  for (std::size_t k = 0; k < n; ++k) gv[k] = checked(g(node(k)), node(k), "integrand");

  auto simpson = [&](std::size_t k) {
    const double mid = node(k) + 0.5 * h;
    return h / 6.0 * (gv[k] + 4.0 * checked(g(mid), mid, "integrand") + gv[k + 1]);
  };
  for (std::size_t k = i0; k + 1 < n; ++k) integral[k + 1] = integral[k] + simpson(k);
  for (std::size_t k = i0; k > 0; --k) integral[k - 1] = integral[k] - simpson(k - 1);

  auto table = std::make_shared<const HermiteTable>(origin, h, std::move(integral), gv);
  const Interval dom{table->first_node(), table->last_node()};
  ScalarFn1 gc = g;
  return ScalarFn1({[table](double t) { return table->value(t); }, [gc](double t) { return gc(t); },
                    [gc](double t) { return gc.derivative(t, 1); }, [gc](double t) { return gc.derivative(t, 2); }},
                   dom);
}

}  // namespace quasimin
