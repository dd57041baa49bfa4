#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ordloc {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;
inline constexpr double kSqrt2 = 1.4142135623730950488;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Quadrature did not reach the requested tolerance; carries the partial
/// estimate and the achieved error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_(error_estimate) {}
  double partial() const { return partial_; }
  double error_estimate() const { return error_; }

 private:
  double partial_;
  double error_;
};

/// No sign change on the supplied (possibly expanded) bracket.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo, double hi, int expansions)
      : std::runtime_error(what), lo_(lo), hi_(hi), expansions_(expansions) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int expansions() const { return expansions_; }

 private:
  double lo_, hi_;
  int expansions_;
};

// ---------------------------------------------------------------------------
// Standard normal special functions
// ---------------------------------------------------------------------------

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

/// phi(x)/Phi(x), stable far into the lower tail where both factors underflow.
double norm_hazard_lower(double x);

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature (G7/K15, QUADPACK-style error estimate)
// ---------------------------------------------------------------------------

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // achieved absolute error estimate
  bool converged = false;
  int intervals = 0;

  /// Value if converged, otherwise throws QuadratureError carrying the
  /// partial estimate.
  double value_checked(const char* context = "integrate") const {
    if (!converged) {
      throw QuadratureError(std::string(context) + ": quadrature did not converge"
                            " (error estimate " + std::to_string(error) + ")",
                            value, error);
    }
    return value;
  }
};

namespace detail {

// G7/K15 nodes and weights (positive half; node 0 last).
inline constexpr std::array<double, 8> kXgk = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr std::array<double, 4> kWg = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct PanelEstimate {
  double value;
  double abserr;
};

template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  std::array<double, 7> fv1{}, fv2{};
  const double fc = f(centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::fabs(resk);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;  // Kronrod indices shared with Gauss
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    const double fsum = f1 + f2;
    resg += kWg[j] * fsum;
    resk += kWgk[jtw] * fsum;
    resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    const double fsum = f1 + f2;
    resk += kWgk[jtwm1] * fsum;
    resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }

  const double value = resk * hlgth;
  resabs *= std::fabs(hlgth);
  resasc *= std::fabs(hlgth);

  double abserr = std::fabs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  const double epmach = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * epmach)) {
    abserr = std::max(epmach * 50.0 * resabs, abserr);
  }
  return {value, abserr};
}

}  // namespace detail

/// Adaptive quadrature of f over the finite interval [a, b] to absolute
/// tolerance tol. Worst-interval-first bisection of G7/K15 panels.
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, double tol,
                            int initial_panels = 1, int max_intervals = 2000) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (!(tol > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate_finite: bad interval or tolerance");
  }

  struct Interval {
    double a, b, value, abserr;
  };
  std::vector<Interval> iv;
  iv.reserve(64);
  initial_panels = std::max(1, initial_panels);
  for (int k = 0; k < initial_panels; ++k) {
    const double lo = a + (b - a) * k / initial_panels;
    const double hi = a + (b - a) * (k + 1) / initial_panels;
    auto e = detail::gk15(f, lo, hi);
    iv.push_back({lo, hi, e.value, e.abserr});
  }

  auto total = [&] {
    double v = 0, err = 0;
    for (const auto& s : iv) {
      v += s.value;
      err += s.abserr;
    }
    return std::pair{v, err};
  };

  const double min_width = std::fabs(b - a) * 1e-14;
  while (true) {
    auto [v, err] = total();
    out.value = v;
    out.error = err;
    out.intervals = static_cast<int>(iv.size());
    if (err <= tol) {
      out.converged = true;
      return out;
    }
    if (static_cast<int>(iv.size()) >= max_intervals) return out;

    auto worst = std::max_element(iv.begin(), iv.end(),
                                  [](const Interval& x, const Interval& y) {
                                    return x.abserr < y.abserr;
                                  });
    if (worst->b - worst->a <= min_width) return out;  // cannot refine further

    const Interval w = *worst;
    const double mid = 0.5 * (w.a + w.b);
    auto l = detail::gk15(f, w.a, mid);
    auto r = detail::gk15(f, mid, w.b);
    *worst = {w.a, mid, l.value, l.abserr};
    iv.push_back({mid, w.b, r.value, r.abserr});
  }
}

/// Quadrature with extended-real endpoints. Infinite ends are mapped to a
/// finite parameter by the rational substitutions
///   (-inf, inf): x = u/(1-u^2),   (a, inf): x = a + u/(1-u),
///   (-inf, b):  x = b - u/(1-u).
template <class F>
QuadResult integrate(F&& f, double lo, double hi, double tol = 1e-10,
                     int max_intervals = 2000) {
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) {
    return integrate_finite(f, lo, hi, tol, 1, max_intervals);
  }
  if (lo_inf && hi_inf) {
    auto g = [&f](double u) {
      const double d = 1.0 - u * u;
      return f(u / d) * (1.0 + u * u) / (d * d);
    };
    return integrate_finite(g, -1.0, 1.0, tol, 8, max_intervals);
  }
  if (hi_inf) {
    auto g = [&f, lo](double u) {
      const double d = 1.0 - u;
      return f(lo + u / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, tol, 8, max_intervals);
  }
  auto g = [&f, hi](double u) {
    const double d = 1.0 - u;
    return f(hi - u / d) / (d * d);
  };
  return integrate_finite(g, 0.0, 1.0, tol, 8, max_intervals);
}

/// Integrate over consecutive segments of a sorted knot list and sum.
/// Knots steer the adaptive refinement toward known structure (peaks, kinks).
template <class F>
QuadResult integrate_segments(F&& f, const std::vector<double>& knots, double tol) {
  if (knots.size() < 2) throw std::invalid_argument("integrate_segments: need >= 2 knots");
  QuadResult out;
  out.converged = true;
  const double seg_tol = tol / static_cast<double>(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    auto r = integrate_finite(f, knots[i], knots[i + 1], seg_tol);
    out.value += r.value;
    out.error += r.error;
    out.intervals += r.intervals;
    out.converged = out.converged && r.converged;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bracketed root finding (Brent)
// ---------------------------------------------------------------------------

/// Root of g on [lo, hi]; requires a sign change. tol is on the argument.
template <class G>
double find_root(G&& g, double lo, double hi, double tol = 1e-9) {
  double a = lo, b = hi;
  double fa = g(a), fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) {
    throw BracketError("find_root: no sign change on bracket", lo, hi, 0);
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {        // secant
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {             // inverse quadratic
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = g(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

/// Root of g near `center`: starts from [center - half_width, center + half_width]
/// and doubles the bracket until the signs differ, then runs find_root.
template <class G>
double find_root_expand(G&& g, double center, double half_width, double tol = 1e-9,
                        int max_expansions = 20) {
  double lo = center - half_width, hi = center + half_width;
  double flo = g(lo), fhi = g(hi);
  int k = 0;
  while (flo * fhi > 0.0) {
    if (++k > max_expansions) {
      throw BracketError("find_root_expand: no sign change after " +
                             std::to_string(max_expansions) + " doublings",
                         lo, hi, k - 1);
    }
    half_width *= 2.0;
    lo = center - half_width;
    hi = center + half_width;
    flo = g(lo);
    fhi = g(hi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  return find_root(g, lo, hi, tol);
}

// ---------------------------------------------------------------------------
// Counter-based RNG (Philox2x64-10) with explicit streams
// ---------------------------------------------------------------------------

/// Deterministic counter-based generator. The 128-bit counter is split as
/// (stream, index), so distinct streams of the same seed walk disjoint
/// counter slices and cannot overlap. Integer output is platform-independent;
/// the Gaussian transform inherits libm accuracy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(seed), stream_(stream) {}

  std::uint64_t seed() const { return key_; }
  std::uint64_t stream() const { return stream_; }

  /// Fresh generator on stream `index` of the same seed.
  Rng substream(std::uint64_t index) const { return Rng(key_, index); }

  std::uint64_t next_u64() {
    if (avail_ == 0) {
      buf_ = block(counter_++, stream_, key_);
      avail_ = 2;
    }
    return buf_[--avail_];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// One Box-Muller pair of independent N(0,1) variates.
  std::pair<double, double> next_normal_pair() {
    const double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double v = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double ang = 6.283185307179586477 * v;
    return {r * std::cos(ang), r * std::sin(ang)};
  }

 private:
  static std::array<std::uint64_t, 2> block(std::uint64_t ctr, std::uint64_t stream,
                                            std::uint64_t key) noexcept;

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int avail_ = 0;
};

/// n draws from BVN(theta1, theta2, sigma^2, sigma^2, rho), consumed from rng.
std::vector<std::pair<double, double>> sample_bivariate_normal(
    Rng& rng, double theta1, double theta2, double sigma, double rho, std::size_t n);

// ---------------------------------------------------------------------------
// Monotone piecewise-cubic interpolation (Fritsch-Carlson)
// ---------------------------------------------------------------------------

/// Shape-preserving cubic Hermite interpolant: monotone data yields a
/// monotone interpolant. Evaluation outside the knot range extends linearly
/// with the end slope.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  double y_front() const { return y_.front(); }
  double y_back() const { return y_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace ordloc
