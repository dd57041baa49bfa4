#include "ordloc/numerics.hpp"

namespace ordloc {

double norm_pdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("norm_pdf: non-finite input");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("norm_cdf: NaN input");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / kSqrt2);
}

namespace {

// Acklam's rational approximation, |relative error| < 1.2e-9 before refinement.
double quantile_seed(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("norm_quantile: p must lie in (0, 1)");
  }
  double x = quantile_seed(p);
  // One Halley step against the erfc-based CDF reaches ~1e-15.
  for (int i = 0; i < 2; ++i) {
    const double e = norm_cdf(x) - p;
    const double u = e * std::exp(0.5 * x * x) / kInvSqrt2Pi;
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double norm_hazard_lower(double x) {
  if (std::isnan(x)) throw std::domain_error("norm_hazard_lower: NaN input");
  if (x > -36.0) {
    const double den = norm_cdf(x);
    return norm_pdf(x) / den;
  }
  // Asymptotic expansion 1/R(z) with z = -x (both factors underflow here).
  const double z = -x;
  const double z2 = z * z;
  return z + 1.0 / z - 2.0 / (z * z2) + 10.0 / (z * z2 * z2);
}

std::array<std::uint64_t, 2> Rng::block(std::uint64_t ctr, std::uint64_t stream,
                                        std::uint64_t key) noexcept {
  constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
  constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  std::uint64_t x0 = ctr, x1 = stream, k = key;
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * x0;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ k ^ x1;
    x1 = lo;
    k += kWeyl;
  }
  return {x0, x1};
}

std::vector<std::pair<double, double>> sample_bivariate_normal(
    Rng& rng, double theta1, double theta2, double sigma, double rho, std::size_t n) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sample_bivariate_normal: sigma must be positive");
  }
  if (!(rho > -1.0 && rho < 1.0)) {
    throw std::invalid_argument("sample_bivariate_normal: rho must lie in (-1, 1)");
  }
  const double cross = std::sqrt(1.0 - rho * rho);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [z1, z2] = rng.next_normal_pair();
    out.emplace_back(theta1 + sigma * z1, theta2 + sigma * (rho * z1 + cross * z2));
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("MonotoneCubic: need matching arrays of size >= 2");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i] < x_[i + 1])) {
      throw std::invalid_argument("MonotoneCubic: abscissae must strictly increase");
    }
  }

  std::vector<double> h(n - 1), slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    slope[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }

  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d0 = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d0 * s0 <= 0.0) {
      d0 = 0.0;
    } else if (s0 * s1 < 0.0 && std::fabs(d0) > 3.0 * std::fabs(s0)) {
      d0 = 3.0 * s0;
    }
    return d0;
  };
  if (n == 2) {
    d_[0] = d_[1] = slope[0];
  } else {
    d_[0] = end_slope(h[0], h[1], slope[0], slope[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
  }
}

double MonotoneCubic::operator()(double t) const {
  const std::size_t n = x_.size();
  if (t <= x_.front()) return y_.front() + d_.front() * (t - x_.front());
  if (t >= x_.back()) return y_.back() + d_.back() * (t - x_.back());

  std::size_t hi = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
  const std::size_t i = hi - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  (void)n;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace ordloc
