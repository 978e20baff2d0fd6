#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace nagumo {

/// Clamp of the state variable to [0, 1].
double clamp01(double s);

/// Smooth outward tail used to push solutions back toward [0, 1]:
/// exp(1/s) for s < 0, zero on [0, 1], -exp(1/(1-s)) for s > 1.
/// All one-sided derivatives vanish at the junctions.
double tail_bump(double s);
double tail_bump_deriv(double s);

/// A cubic-like reaction term with zeros at 0 < a < 1, negative on ]0, a[,
/// positive on ]a, 1[, and positive slope at the middle zero.
class Nonlinearity {
 public:
  /// General constructor; f and df may be any callables with the required
  /// sign pattern (checked on a sampled grid at construction).
  Nonlinearity(double a, std::function<double(double)> f,
               std::function<double(double)> df);

  /// The canonical family s(1-s)(s-a).
  static Nonlinearity cubic(double a);

  double a() const { return a_; }
  double operator()(double s) const { return f_(s); }
  double deriv(double s) const { return df_(s); }

  /// True for the cubic family, whose antiderivative is known in closed form.
  bool has_exact_primitive() const { return cubic_; }
  /// Exact antiderivative of the cubic family from 0 to s.
  double exact_primitive(double s) const;

 private:
  double a_;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
  bool cubic_ = false;
};

/// Bounded, globally Lipschitz modification of a Nonlinearity: the base term
/// composed with the clamp, plus k0 times the outward tail. Agrees with the
/// base on [0, 1], is positive left of 0 and negative right of 1, and has
/// global sup norm equal to the base's max on [0, 1].
class ModifiedNonlinearity {
 public:
  double operator()(double s) const;
  double deriv(double s) const;
  /// Antiderivative from 0 to x (grid-cached on [0, 1], quadrature outside).
  double primitive(double x) const;

  double k0() const;
  double c0() const;
  double lipschitz() const;
  double a() const;
  const Nonlinearity& base() const;

 private:
  friend ModifiedNonlinearity build_modified(const Nonlinearity&, double);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Builds the modification with the given tail gain; requires 0 < k0 <= c0
/// where c0 is the max of |f| over [0, 1].
ModifiedNonlinearity build_modified(const Nonlinearity& f, double k0);
/// Same with the default gain k0 = c0.
ModifiedNonlinearity build_modified(const Nonlinearity& f);

struct WeightSegment {
  double t_end;   ///< right endpoint of the segment within one period
  double value;   ///< constant weight value on the segment
};

enum class WeightKind { Constant, Piecewise, Sampled };
enum class SplitStrategy { Mean, PlateauValue, Explicit };

/// A positive beta-periodic coefficient: either piecewise constant (list of
/// segments covering one period) or a sampled profile with linear
/// interpolation. Values at discontinuities follow the right-limit
/// convention. After splitting it also carries the constant part nbar and
/// the L1 norm of the remainder over one period.
class Weight {
 public:
  static Weight constant(double beta, double value);
  static Weight piecewise_constant(double beta, std::vector<WeightSegment> segs);
  static Weight sampled(double beta, std::vector<double> t, std::vector<double> v);

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  double beta() const;
  WeightKind kind() const;
  double period_integral() const;            ///< integral of n over one period
  double period_l1(double nbar) const;       ///< integral of |n - nbar| over one period

  /// Interior discontinuities (piecewise) or kinks (sampled) in ]0, beta[,
  /// plus the period endpoint 0; used as integrator restart points.
  const std::vector<double>& period_breakpoints() const;
  /// All restart times in the open interval (t0, t1).
  std::vector<double> restart_times(double t0, double t1) const;

  bool has_split() const;
  double nbar() const;
  double ntilde_l1() const;

  const std::vector<WeightSegment>& segments() const;
  const std::vector<double>& sample_times() const;
  const std::vector<double>& sample_values() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  friend Weight split_weight(const Weight&, SplitStrategy, double);
};

/// Returns a copy of w with nbar and the one-period L1 norm of the remainder
/// filled in. The mean strategy uses the period average; plateau-value (only
/// for piecewise weights) uses the value attained on the longest constant
/// segment; explicit uses the supplied value.
Weight split_weight(const Weight& w, SplitStrategy strategy,
                    double explicit_nbar = 0.0);

/// L1 norm of the remainder over [0, m*beta].
double l1_norm_over(const Weight& w, int m);

/// Full model data of the time-dependent planar system.
struct SystemParams {
  double g;                   ///< linear decay constant, > 0
  Weight weight;              ///< beta-periodic coefficient
  ModifiedNonlinearity f0;    ///< bounded reaction term
};

/// h(t, s) = -g s + n(t) f0(s); the second equation of the system reads
/// y' = -h(t, x).
double hval(const SystemParams& p, double t, double s);

}  // namespace nagumo
