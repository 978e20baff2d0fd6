#include "nagumo/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nagumo/errors.hpp"
#include "nagumo/numerics.hpp"

namespace nagumo {

double clamp01(double s) { return std::max(0.0, std::min(s, 1.0)); }

double tail_bump(double s) {
  if (s < 0.0) return std::exp(1.0 / s);
  if (s > 1.0) return -std::exp(1.0 / (1.0 - s));
  return 0.0;
}

double tail_bump_deriv(double s) {
  if (s < 0.0) return -std::exp(1.0 / s) / (s * s);
  if (s > 1.0) return -std::exp(1.0 / (1.0 - s)) / ((1.0 - s) * (1.0 - s));
  return 0.0;
}

namespace {
constexpr int kSignGrid = 512;
constexpr double kZeroTol = 1e-9;
}  // namespace

Nonlinearity::Nonlinearity(double a, std::function<double(double)> f,
                           std::function<double(double)> df)
    : a_(a), f_(std::move(f)), df_(std::move(df)) {
  if (!(a > 0.0 && a < 1.0))
    throw HypothesisError("nonlinearity: middle zero must lie in ]0,1[");
  if (std::abs(f_(0.0)) > kZeroTol || std::abs(f_(a_)) > kZeroTol ||
      std::abs(f_(1.0)) > kZeroTol)
    throw HypothesisError("nonlinearity: f must vanish at 0, a and 1");
  for (int i = 1; i < kSignGrid; ++i) {
    const double s = a_ * i / kSignGrid;
    if (f_(s) >= 0.0)
      throw HypothesisError("nonlinearity: f must be negative on ]0,a[");
  }
  for (int i = 1; i < kSignGrid; ++i) {
    const double s = a_ + (1.0 - a_) * i / kSignGrid;
    if (f_(s) <= 0.0)
      throw HypothesisError("nonlinearity: f must be positive on ]a,1[");
  }
  if (df_(a_) <= 0.0)
    throw HypothesisError("nonlinearity: slope at the middle zero must be positive");
}

Nonlinearity Nonlinearity::cubic(double a) {
  Nonlinearity n(
      a, [a](double s) { return s * (1.0 - s) * (s - a); },
      [a](double s) { return -3.0 * s * s + 2.0 * (1.0 + a) * s - a; });
  n.cubic_ = true;
  return n;
}

double Nonlinearity::exact_primitive(double s) const {
  if (!cubic_)
    throw Error("exact_primitive is available only for the cubic family");
  // integral of -s^3 + (1+a)s^2 - a s
  return -0.25 * s * s * s * s + (1.0 + a_) / 3.0 * s * s * s -
         0.5 * a_ * s * s;
}

struct ModifiedNonlinearity::Impl {
  Nonlinearity base;
  double k0 = 0.0;
  double c0 = 0.0;
  double lipschitz = 0.0;
  // cumulative antiderivative of f on [0, 1] at grid nodes
  std::vector<double> prim_grid;
  int grid_n = 4096;

  explicit Impl(Nonlinearity b) : base(std::move(b)) {}

  double eval(double s) const { return base(clamp01(s)) + k0 * tail_bump(s); }

  double deriv(double s) const {
    if (s < 0.0 || s > 1.0) return k0 * tail_bump_deriv(s);
    return base.deriv(s);
  }

  void build_primitive_grid() {
    prim_grid.assign(grid_n + 1, 0.0);
    const auto& [x, w] = gauss_legendre(8);
    double acc = 0.0;
    for (int i = 0; i < grid_n; ++i) {
      const double a = static_cast<double>(i) / grid_n;
      const double b = static_cast<double>(i + 1) / grid_n;
      const double mid = 0.5 * (a + b), hal = 0.5 * (b - a);
      double cell = 0.0;
      for (size_t j = 0; j < x.size(); ++j) cell += w[j] * base(mid + hal * x[j]);
      acc += hal * cell;
      prim_grid[i + 1] = acc;
    }
  }

  double primitive01(double s) const {
    // s in [0,1]: grid value plus a local 8-point correction on the partial cell
    const double pos = s * grid_n;
    int cell = static_cast<int>(pos);
    cell = std::max(0, std::min(cell, grid_n - 1));
    const double a = static_cast<double>(cell) / grid_n;
    const auto& [x, w] = gauss_legendre(8);
    const double mid = 0.5 * (a + s), hal = 0.5 * (s - a);
    double part = 0.0;
    for (size_t j = 0; j < x.size(); ++j) part += w[j] * base(mid + hal * x[j]);
    return prim_grid[cell] + hal * part;
  }

  double primitive(double s) const {
    if (s >= 0.0 && s <= 1.0) return primitive01(s);
    const auto tail = [this](double u) { return k0 * tail_bump(u); };
    if (s > 1.0) return prim_grid[grid_n] + adaptive_simpson(tail, 1.0, s, 1e-13);
    return -adaptive_simpson(tail, s, 0.0, 1e-13);
  }
};

double ModifiedNonlinearity::operator()(double s) const { return impl_->eval(s); }
double ModifiedNonlinearity::deriv(double s) const { return impl_->deriv(s); }
double ModifiedNonlinearity::primitive(double x) const { return impl_->primitive(x); }
double ModifiedNonlinearity::k0() const { return impl_->k0; }
double ModifiedNonlinearity::c0() const { return impl_->c0; }
double ModifiedNonlinearity::lipschitz() const { return impl_->lipschitz; }
double ModifiedNonlinearity::a() const { return impl_->base.a(); }
const Nonlinearity& ModifiedNonlinearity::base() const { return impl_->base; }

ModifiedNonlinearity build_modified(const Nonlinearity& f, double k0) {
  auto impl = std::make_shared<ModifiedNonlinearity::Impl>(f);
  impl->c0 = grid_max([&f](double s) { return std::abs(f(s)); }, 0.0, 1.0, 4096,
                      1e-10);
  if (!(k0 > 0.0))
    throw HypothesisError("build_modified: tail gain must be positive");
  if (k0 > impl->c0 * (1.0 + 1e-12))
    throw HypothesisError("build_modified: tail gain must not exceed the max of |f| on [0,1]");
  impl->k0 = std::min(k0, impl->c0);
  // global slope bound: interior slope on [0,1] plus the tail slope, whose
  // extremum k0 * 4/e^2 sits half a unit outside each junction
  const double interior =
      grid_max([&f](double s) { return std::abs(f.deriv(s)); }, 0.0, 1.0, 4096,
               1e-10);
  const double tail = impl->k0 * grid_max(
      [](double s) { return std::abs(tail_bump_deriv(s)); }, -4.0, 0.0 - 1e-12,
      4096, 1e-10);
  impl->lipschitz = std::max(interior, tail);
  impl->build_primitive_grid();
  ModifiedNonlinearity out;
  out.impl_ = std::move(impl);
  return out;
}

ModifiedNonlinearity build_modified(const Nonlinearity& f) {
  const double c0 =
      grid_max([&f](double s) { return std::abs(f(s)); }, 0.0, 1.0, 4096, 1e-10);
  return build_modified(f, c0);
}

struct Weight::Impl {
  WeightKind kind = WeightKind::Constant;
  double beta = 1.0;
  std::vector<WeightSegment> segs;     // piecewise/constant
  std::vector<double> st, sv;          // sampled
  std::vector<double> breakpoints;     // {0} plus interior ones, in [0,beta[
  bool split = false;
  double nbar = 0.0;
  double ntilde_l1 = 0.0;

  double fold(double t) const {
    double tau = std::fmod(t, beta);
    if (tau < 0.0) tau += beta;
    return tau;
  }

  double eval(double t) const {
    const double tau = fold(t);
    if (kind != WeightKind::Sampled) {
      for (const auto& s : segs)
        if (tau < s.t_end) return s.value;
      return segs.back().value;  // tau == beta only via rounding
    }
    auto it = std::upper_bound(st.begin(), st.end(), tau);
    if (it == st.begin()) return sv.front();
    if (it == st.end()) return sv.back();
    const size_t i = static_cast<size_t>(it - st.begin());
    const double w = (tau - st[i - 1]) / (st[i] - st[i - 1]);
    return sv[i - 1] + w * (sv[i] - sv[i - 1]);
  }

  double integral() const {
    if (kind != WeightKind::Sampled) {
      double acc = 0.0, prev = 0.0;
      for (const auto& s : segs) {
        acc += s.value * (s.t_end - prev);
        prev = s.t_end;
      }
      return acc;
    }
    double acc = 0.0;
    for (size_t i = 1; i < st.size(); ++i)
      acc += 0.5 * (sv[i] + sv[i - 1]) * (st[i] - st[i - 1]);
    return acc;
  }

  double l1_dist(double c) const {
    if (kind != WeightKind::Sampled) {
      double acc = 0.0, prev = 0.0;
      for (const auto& s : segs) {
        acc += std::abs(s.value - c) * (s.t_end - prev);
        prev = s.t_end;
      }
      return acc;
    }
    // piecewise linear: split cells where the profile crosses c
    double acc = 0.0;
    for (size_t i = 1; i < st.size(); ++i) {
      const double a = sv[i - 1] - c, b = sv[i] - c;
      const double len = st[i] - st[i - 1];
      if ((a >= 0) == (b >= 0)) {
        acc += 0.5 * std::abs(a + b) * len;
      } else {
        const double tc = a / (a - b);  // zero crossing in [0,1]
        acc += 0.5 * std::abs(a) * tc * len + 0.5 * std::abs(b) * (1.0 - tc) * len;
      }
    }
    return acc;
  }
};

Weight Weight::constant(double beta, double value) {
  if (!(beta > 0.0)) throw HypothesisError("weight: period must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = WeightKind::Constant;
  impl->beta = beta;
  if (!(value > 0.0)) throw HypothesisError("weight: values must be positive");
  impl->segs = {{beta, value}};
  impl->breakpoints = {0.0};
  Weight w;
  w.impl_ = std::move(impl);
  return w;
}

Weight Weight::piecewise_constant(double beta, std::vector<WeightSegment> segs) {
  if (!(beta > 0.0)) throw HypothesisError("weight: period must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = WeightKind::Piecewise;
  impl->beta = beta;
  if (segs.empty()) throw HypothesisError("weight: empty segment list");
  double prev = 0.0;
  for (const auto& s : segs) {
    if (!(s.value > 0.0)) throw HypothesisError("weight: values must be positive");
    if (!(s.t_end > prev))
      throw HypothesisError("weight: segment ends must be strictly increasing");
    prev = s.t_end;
  }
  if (std::abs(prev - beta) > 1e-12 * std::max(1.0, beta))
    throw HypothesisError("weight: last segment must end at the period");
  segs.back().t_end = beta;
  impl->segs = std::move(segs);
  impl->breakpoints.push_back(0.0);
  for (size_t i = 0; i + 1 < impl->segs.size(); ++i)
    impl->breakpoints.push_back(impl->segs[i].t_end);
  Weight w;
  w.impl_ = std::move(impl);
  return w;
}

Weight Weight::sampled(double beta, std::vector<double> t, std::vector<double> v) {
  if (!(beta > 0.0)) throw HypothesisError("weight: period must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = WeightKind::Sampled;
  impl->beta = beta;
  if (t.size() != v.size() || t.size() < 2)
    throw HypothesisError("weight: sampled profile needs matching t/v lists with >= 2 nodes");
  if (std::abs(t.front()) > 1e-12 || std::abs(t.back() - beta) > 1e-12 * std::max(1.0, beta))
    throw HypothesisError("weight: sample grid must span [0, beta]");
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw HypothesisError("weight: sample times must be strictly increasing");
  for (double x : v)
    if (!(x > 0.0)) throw HypothesisError("weight: values must be positive");
  t.front() = 0.0;
  t.back() = beta;
  impl->st = std::move(t);
  impl->sv = std::move(v);
  impl->breakpoints.push_back(0.0);
  for (size_t i = 1; i + 1 < impl->st.size(); ++i)
    impl->breakpoints.push_back(impl->st[i]);
  Weight w;
  w.impl_ = std::move(impl);
  return w;
}

double Weight::eval(double t) const { return impl_->eval(t); }
double Weight::beta() const { return impl_->beta; }
WeightKind Weight::kind() const { return impl_->kind; }
double Weight::period_integral() const { return impl_->integral(); }
double Weight::period_l1(double nbar) const { return impl_->l1_dist(nbar); }
const std::vector<double>& Weight::period_breakpoints() const {
  return impl_->breakpoints;
}

std::vector<double> Weight::restart_times(double t0, double t1) const {
  std::vector<double> out;
  const double beta = impl_->beta;
  const long k0 = static_cast<long>(std::floor(t0 / beta)) - 1;
  const long k1 = static_cast<long>(std::ceil(t1 / beta)) + 1;
  for (long k = k0; k <= k1; ++k) {
    for (double bp : impl_->breakpoints) {
      const double t = k * beta + bp;
      if (t > t0 && t < t1) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Weight::has_split() const { return impl_->split; }

double Weight::nbar() const {
  if (!impl_->split) throw Error("weight: split not performed");
  return impl_->nbar;
}

double Weight::ntilde_l1() const {
  if (!impl_->split) throw Error("weight: split not performed");
  return impl_->ntilde_l1;
}

const std::vector<WeightSegment>& Weight::segments() const { return impl_->segs; }
const std::vector<double>& Weight::sample_times() const { return impl_->st; }
const std::vector<double>& Weight::sample_values() const { return impl_->sv; }

Weight split_weight(const Weight& w, SplitStrategy strategy, double explicit_nbar) {
  auto impl = std::make_shared<Weight::Impl>(*w.impl_);
  switch (strategy) {
    case SplitStrategy::Mean:
      impl->nbar = impl->integral() / impl->beta;
      break;
    case SplitStrategy::PlateauValue: {
      if (impl->kind == WeightKind::Sampled)
        throw ConfigError("split: plateau-value strategy requires a piecewise weight");
      double best_len = -1.0, prev = 0.0;
      for (const auto& s : impl->segs) {
        const double len = s.t_end - prev;
        if (len > best_len) {
          best_len = len;
          impl->nbar = s.value;
        }
        prev = s.t_end;
      }
      break;
    }
    case SplitStrategy::Explicit:
      if (!(explicit_nbar > 0.0))
        throw ConfigError("split: explicit constant part must be positive");
      impl->nbar = explicit_nbar;
      break;
  }
  impl->ntilde_l1 = impl->l1_dist(impl->nbar);
  impl->split = true;
  Weight out;
  out.impl_ = std::move(impl);
  return out;
}

double l1_norm_over(const Weight& w, int m) {
  if (m < 1) throw Error("l1_norm_over: m must be >= 1");
  return m * w.ntilde_l1();
}

double hval(const SystemParams& p, double t, double s) {
  return -p.g * s + p.weight(t) * p.f0(s);
}

}  // namespace nagumo
