#include "inertia/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

std::string to_string(Family f) {
  switch (f) {
    case Family::Constant: return "constant";
    case Family::Power: return "power";
    case Family::AlphaOverTPower: return "alpha_over_t_power";
    case Family::ExpPower: return "exp_power";
    case Family::Sum: return "sum";
    case Family::Product: return "product";
    case Family::Table: return "table";
    case Family::Derived: return "derived";
  }
  return "unknown";
}

class Schedule::Node {
 public:
  Node(Family f, std::vector<double> p, double t0)
      : family(f), params(std::move(p)), t0(t0), t_min_(t0 - 1e-14 * std::max(1.0, std::abs(t0))) {}
  virtual ~Node() = default;

  virtual Scaled jet(double t) const = 0;
  virtual double value(double t) const { return jet(t).value(); }
  virtual Jet log_jet(double t) const { return log(jet(t)); }
  virtual std::string describe() const {
    std::ostringstream os;
    os << to_string(family) << "(";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i];
    os << "; t0=" << t0 << ")";
    return os.str();
  }

  void check(double t) const {
    if (!(t >= t_min_))
      throw DomainError(describe() + ": t=" + std::to_string(t) + " is before t0");
  }

  Family family;
  std::vector<double> params;
  std::vector<Schedule> children;
  double t0;

 private:
  double t_min_;
};

namespace {

bool is_integer(double p) { return p == std::floor(p); }

// t^p with the exponents that occur in practice special-cased; the integrator
// evaluates schedules several times per step.
inline double pow_fast(double t, double p) {
  if (p == 1.0) return t;
  if (p == -1.0) return 1.0 / t;
  if (p == 0.0) return 1.0;
  if (p == 2.0) return t * t;
  if (p == 0.5) return std::sqrt(t);
  if (p == -0.5) return 1.0 / std::sqrt(t);
  return std::pow(t, p);
}

// k t^p expanded at t.
Jet power_jet(double k, double p, double t) {
  Jet j;
  j.c[0] = k * std::pow(t, p);
  for (int i = 0; i < Jet::kOrder; ++i) j.c[i + 1] = j.c[i] * (p - i) / ((i + 1) * t);
  if (is_integer(p) && p >= 0) {
    // Avoid 0/0 at t = 0 for polynomials.
    for (int i = 0; i <= Jet::kOrder; ++i) {
      double coef = k;
      for (int m = 0; m < i; ++m) coef *= (p - m) / (m + 1);
      j.c[i] = (i > p) ? 0.0 : coef * std::pow(t, p - i);
    }
  }
  return j;
}

void check_power_domain(const Schedule::Node& n, double p, double t) {
  if (!(is_integer(p) && p >= 0) && !(t > 0.0))
    throw DomainError(n.describe() + ": singular at t=" + std::to_string(t));
}

class ConstantNode final : public Schedule::Node {
 public:
  ConstantNode(double k, double t0) : Node(Family::Constant, {k}, t0) {}
  Scaled jet(double t) const override {
    check(t);
    return Scaled(Jet::constant(params[0]));
  }
  double value(double t) const override {
    check(t);
    return params[0];
  }
};

class PowerNode final : public Schedule::Node {
 public:
  PowerNode(Family f, double k, double p, std::vector<double> shown, double t0)
      : Node(f, std::move(shown), t0), k_(k), p_(p) {}
  Scaled jet(double t) const override {
    check(t);
    check_power_domain(*this, p_, t);
    return Scaled(power_jet(k_, p_, t));
  }
  double value(double t) const override {
    check(t);
    check_power_domain(*this, p_, t);
    return k_ * pow_fast(t, p_);
  }
  Jet log_jet(double t) const override {
    check(t);
    check_power_domain(*this, p_, t);
    return log(Jet::variable(t)) * p_ + std::log(k_);
  }

 private:
  double k_, p_;
};

class ExpPowerNode final : public Schedule::Node {
 public:
  ExpPowerNode(double k, double mu, double q, double t0)
      : Node(Family::ExpPower, {k, mu, q}, t0), k_(k), mu_(mu), q_(q), needs_positive_(!(is_integer(q) && q >= 0)) {}
  Scaled jet(double t) const override {
    check(t);
    check_power_domain(*this, params[2], t);
    const double k = params[0];
    if (k == 0.0) return Scaled();
    Jet e = power_jet(params[1], params[2], t) + std::log(std::abs(k));
    Scaled r = exp_scaled(e);
    return k > 0 ? r : -r;
  }
  double value(double t) const override {
    check(t);
    if (needs_positive_ && !(t > 0.0)) check_power_domain(*this, q_, t);
    return k_ * std::exp(mu_ * pow_fast(t, q_));
  }
  Jet log_jet(double t) const override {
    check(t);
    check_power_domain(*this, params[2], t);
    return power_jet(params[1], params[2], t) + std::log(params[0]);
  }

 private:
  double k_, mu_, q_;
  bool needs_positive_;
};

double max_t0(const std::vector<Schedule>& xs) {
  double t0 = -std::numeric_limits<double>::infinity();
  for (const auto& x : xs) t0 = std::max(t0, x.t0());
  return xs.empty() ? 0.0 : t0;
}

class SumNode final : public Schedule::Node {
 public:
  explicit SumNode(std::vector<Schedule> xs) : Node(Family::Sum, {}, max_t0(xs)) { children = std::move(xs); }
  Scaled jet(double t) const override {
    Scaled s;
    for (const auto& c : children) s = s + c.jet(t);
    return s;
  }
  double value(double t) const override {
    double s = 0.0;
    for (const auto& c : children) s += c.value(t);
    return s;
  }
  std::string describe() const override {
    std::string s = "sum(";
    for (std::size_t i = 0; i < children.size(); ++i) s += (i ? ", " : "") + children[i].describe();
    return s + ")";
  }
};

class ProductNode final : public Schedule::Node {
 public:
  explicit ProductNode(std::vector<Schedule> xs) : Node(Family::Product, {}, max_t0(xs)) {
    children = std::move(xs);
  }
  Scaled jet(double t) const override {
    Scaled s = Scaled::constant(1.0);
    for (const auto& c : children) s = s * c.jet(t);
    return s;
  }
  double value(double t) const override {
    double s = 1.0;
    for (const auto& c : children) s *= c.value(t);
    return s;
  }
  Jet log_jet(double t) const override {
    Jet s;
    for (const auto& c : children) s += c.log_jet(t);
    return s;
  }
  std::string describe() const override {
    std::string s = "product(";
    for (std::size_t i = 0; i < children.size(); ++i) s += (i ? ", " : "") + children[i].describe();
    return s + ")";
  }
};

class TableNode final : public Schedule::Node {
 public:
  TableNode(std::vector<double> t, std::vector<double> v)
      : Node(Family::Table, {}, t.empty() ? 0.0 : t.front()), t_(std::move(t)), v_(std::move(v)) {
    if (t_.size() < 2 || t_.size() != v_.size())
      throw ConfigError("table schedule needs at least two (t, v) pairs of equal length");
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (!(t_[i] > t_[i - 1])) throw ConfigError("table schedule knots must be strictly increasing");
    params = t_;
    params.insert(params.end(), v_.begin(), v_.end());
    solve_natural_spline();
  }
  Scaled jet(double t) const override {
    check(t);
    if (t > t_.back() * (1 + 1e-14))
      throw DomainError("table schedule: t=" + std::to_string(t) + " beyond last knot");
    std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin();
    i = std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h;
    const double b = 1.0 - a;
    Jet j;
    j.c[0] = a * v_[i] + b * v_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    j.c[1] = (v_[i + 1] - v_[i]) / h - (3 * a * a - 1) / 6.0 * h * m_[i] + (3 * b * b - 1) / 6.0 * h * m_[i + 1];
    j.c[2] = 0.5 * (a * m_[i] + b * m_[i + 1]);
    j.c[3] = (m_[i + 1] - m_[i]) / h / 6.0;
    return Scaled(j);
  }

 private:
  void solve_natural_spline() {
    const std::size_t n = t_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      sub[i] = h0 / 6.0;
      diag[i] = (h0 + h1) / 3.0;
      sup[i] = h1 / 6.0;
      rhs[i] = (v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0;
    }
    // Thomas algorithm on the interior rows.
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  std::vector<double> t_, v_, m_;
};

class DerivedNode final : public Schedule::Node {
 public:
  DerivedNode(std::string name, double t0, std::function<Scaled(double)> fn, std::function<Jet(double)> log_fn)
      : Node(Family::Derived, {}, t0), name_(std::move(name)), fn_(std::move(fn)), log_fn_(std::move(log_fn)) {}
  Scaled jet(double t) const override {
    check(t);
    return fn_(t);
  }
  Jet log_jet(double t) const override {
    check(t);
    return log_fn_ ? log_fn_(t) : log(fn_(t));
  }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<Scaled(double)> fn_;
  std::function<Jet(double)> log_fn_;
};

}  // namespace

Schedule::Schedule() : node_(std::make_shared<ConstantNode>(0.0, 0.0)) {}

Schedule Schedule::constant(double k, double t0) { return Schedule(std::make_shared<ConstantNode>(k, t0)); }

Schedule Schedule::power(double k, double p, double t0) {
  return Schedule(std::make_shared<PowerNode>(Family::Power, k, p, std::vector<double>{k, p}, t0));
}

Schedule Schedule::alpha_over_t_power(double alpha, double q, double t0) {
  return Schedule(
      std::make_shared<PowerNode>(Family::AlphaOverTPower, alpha, q - 1.0, std::vector<double>{alpha, q}, t0));
}

Schedule Schedule::exp_power(double k, double mu, double q, double t0) {
  return Schedule(std::make_shared<ExpPowerNode>(k, mu, q, t0));
}

Schedule Schedule::sum(std::vector<Schedule> terms) {
  if (terms.empty()) return Schedule();
  return Schedule(std::make_shared<SumNode>(std::move(terms)));
}

Schedule Schedule::product(std::vector<Schedule> factors) {
  if (factors.empty()) return constant(1.0);
  return Schedule(std::make_shared<ProductNode>(std::move(factors)));
}

Schedule Schedule::table(std::vector<double> t, std::vector<double> v) {
  return Schedule(std::make_shared<TableNode>(std::move(t), std::move(v)));
}

Schedule Schedule::derived(std::string name, double t0, std::function<Scaled(double)> fn,
                           std::function<Jet(double)> log_fn) {
  return Schedule(std::make_shared<DerivedNode>(std::move(name), t0, std::move(fn), std::move(log_fn)));
}

Family Schedule::family() const { return node_->family; }
const std::vector<double>& Schedule::params() const { return node_->params; }
const std::vector<Schedule>& Schedule::children() const { return node_->children; }
double Schedule::t0() const { return node_->t0; }
std::string Schedule::describe() const { return node_->describe(); }
Scaled Schedule::jet(double t) const { return node_->jet(t); }
double Schedule::value(double t) const { return node_->value(t); }
Jet Schedule::log_jet(double t) const { return node_->log_jet(t); }

bool Schedule::is_zero() const {
  switch (family()) {
    case Family::Constant:
    case Family::Power:
    case Family::AlphaOverTPower:
    case Family::ExpPower:
      return params()[0] == 0.0;
    case Family::Sum:
      return std::all_of(children().begin(), children().end(), [](const Schedule& s) { return s.is_zero(); });
    case Family::Product:
      return std::any_of(children().begin(), children().end(), [](const Schedule& s) { return s.is_zero(); });
    default:
      return false;
  }
}

std::optional<double> Schedule::alpha_over_t() const {
  if (family() == Family::AlphaOverTPower && params()[1] == 0.0) return params()[0];
  if (family() == Family::Power && params()[1] == -1.0) return params()[0];
  return std::nullopt;
}

bool Schedule::nondecreasing_on(const std::vector<double>& grid, double rel_tol) const {
  for (double t : grid) {
    const Scaled j = jet(t);
    if (j.j.c[1] < -rel_tol * (std::abs(j.j.c[0]) + std::abs(j.j.c[1]))) return false;
  }
  return true;
}

bool Schedule::log_concave_on(const std::vector<double>& grid, double rel_tol) const {
  for (double t : grid) {
    const Jet l = log_jet(t);
    const double l1 = l.d(1), l2 = l.d(2);
    if (l2 > rel_tol * (l1 * l1 + std::abs(l2))) return false;
  }
  return true;
}

Eval eval(const Schedule& s, double t) {
  const Jet j = s.jet(t).to_jet();
  return {j.d(0), j.d(1), j.d(2)};
}

Schedule operator+(const Schedule& a, const Schedule& b) { return Schedule::sum({a, b}); }
Schedule operator*(const Schedule& a, const Schedule& b) { return Schedule::product({a, b}); }
Schedule operator*(double k, const Schedule& a) { return Schedule::product({Schedule::constant(k, a.t0()), a}); }

}  // namespace inertia
