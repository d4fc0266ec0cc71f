#include "survmix/survdist.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "survmix/errors.hpp"
#include "survmix/specfun.hpp"

namespace survmix {

namespace {

constexpr double kShapeLo = 0.05;
constexpr double kShapeHi = 700.0;
constexpr double kShapeTol = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw_invalid("time must be finite and > 0");
  }
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::lognormal: return "lognormal";
    case Family::gamma: return "gamma";
    case Family::weibull: return "weibull";
  }
  throw_invalid("unknown family tag");
}

Family parse_family(const std::string& name) {
  if (name == "lognormal") return Family::lognormal;
  if (name == "gamma") return Family::gamma;
  if (name == "weibull") return Family::weibull;
  throw_invalid("unknown family '" + name +
                "' (expected lognormal, gamma, or weibull)");
}

void Moments::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma2) || mu <= 0.0 || sigma2 <= 0.0) {
    std::ostringstream msg;
    msg << "moments must be finite and positive (mu=" << mu
        << ", sigma2=" << sigma2 << ")";
    throw_invalid(msg.str());
  }
}

LognormalParams lognormal_from_moments(const Moments& m) {
  m.validate();
  // varlog = log(1 + sigma2/mu^2); meanlog = log(mu) - varlog/2, so that
  // E[T] = mu and Var[T] = sigma2 under exp-normal moments.
  const double varlog = std::log1p(m.sigma2 / (m.mu * m.mu));
  const double meanlog = std::log(m.mu) - 0.5 * varlog;
  return {meanlog, varlog};
}

GammaParams gamma_from_moments(const Moments& m) {
  m.validate();
  return {m.sigma2 / m.mu, m.mu * m.mu / m.sigma2};
}

double weibull_shape_residual(const Moments& m, double shape) {
  const double target = std::log1p(m.sigma2 / (m.mu * m.mu));
  return 2.0 * specfun::log_gamma(1.0 + 1.0 / shape) -
         specfun::log_gamma(1.0 + 2.0 / shape) + target;
}

WeibullParams weibull_from_moments(const Moments& m) {
  m.validate();
  // The residual is strictly increasing in the shape; solve by Newton with
  // a maintained bisection bracket.
  double lo = kShapeLo;
  double hi = kShapeHi;
  double f_lo = weibull_shape_residual(m, lo);
  double f_hi = weibull_shape_residual(m, hi);
  if (f_lo > 0.0 || f_hi < 0.0) {
    std::ostringstream msg;
    msg << "weibull shape not representable on [" << kShapeLo << ", " << kShapeHi
        << "] for cv^2=" << m.sigma2 / (m.mu * m.mu)
        << " (bracket residuals " << f_lo << ", " << f_hi << ")";
    throw_numeric(msg.str());
  }

  // Wind-engineering starting guess shape ~= cv^{-1.086}, clamped to bracket.
  const double cv = std::sqrt(m.sigma2) / m.mu;
  double b = std::pow(cv, -1.086);
  if (!(b > lo && b < hi)) b = 0.5 * (lo + hi);

  double f_b = weibull_shape_residual(m, b);
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(f_b) <= kShapeTol) break;
    if (f_b > 0.0) {
      hi = b;
    } else {
      lo = b;
    }
    const double inv_b = 1.0 / b;
    const double deriv =
        2.0 * inv_b * inv_b *
        (specfun::digamma(1.0 + 2.0 * inv_b) - specfun::digamma(1.0 + inv_b));
    double next = b - f_b / deriv;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);  // bisection fallback
    }
    b = next;
    f_b = weibull_shape_residual(m, b);
  }
  if (std::fabs(f_b) > 1e-10) {
    std::ostringstream msg;
    msg << "weibull shape solver did not converge (last residual " << f_b << ")";
    throw_numeric(msg.str());
  }
  const double scale = m.mu * std::exp(-specfun::log_gamma(1.0 + 1.0 / b));
  return {scale, b};
}

Component::Component(Family f, const Moments& m) : family_(f) {
  switch (f) {
    case Family::lognormal: {
      const auto p = lognormal_from_moments(m);
      meanlog_ = p.meanlog;
      varlog_ = p.varlog;
      log_norm_ = -0.5 * std::log(kTwoPi * varlog_);
      break;
    }
    case Family::gamma: {
      const auto p = gamma_from_moments(m);
      scale_ = p.scale;
      shape_ = p.shape;
      log_scale_ = std::log(scale_);
      log_norm_ = -specfun::log_gamma(shape_) - shape_ * log_scale_;
      break;
    }
    case Family::weibull: {
      const auto p = weibull_from_moments(m);
      scale_ = p.scale;
      shape_ = p.shape;
      log_scale_ = std::log(scale_);
      log_norm_ = std::log(shape_) - shape_ * log_scale_;
      break;
    }
  }
}

double Component::log_pdf(double t) const {
  require_positive_time(t);
  return log_pdf(t, std::log(t));
}

double Component::log_pdf(double t, double log_t) const {
  switch (family_) {
    case Family::lognormal: {
      const double z = log_t - meanlog_;
      return log_norm_ - log_t - 0.5 * z * z / varlog_;
    }
    case Family::gamma:
      return log_norm_ + (shape_ - 1.0) * log_t - t / scale_;
    case Family::weibull:
      return log_norm_ + (shape_ - 1.0) * log_t -
             std::exp(shape_ * (log_t - log_scale_));
  }
  throw_invalid("unknown family tag");
}

double Component::survival(double t) const {
  require_positive_time(t);
  switch (family_) {
    case Family::lognormal:
      return specfun::normal_ccdf((std::log(t) - meanlog_) / std::sqrt(varlog_));
    case Family::gamma:
      return specfun::reg_gamma_upper(shape_, t / scale_);
    case Family::weibull:
      return std::exp(-std::pow(t / scale_, shape_));
  }
  throw_invalid("unknown family tag");
}

double Component::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::lognormal:
      return specfun::normal_cdf((std::log(t) - meanlog_) / std::sqrt(varlog_));
    case Family::gamma:
      return specfun::reg_gamma_lower(shape_, t / scale_);
    case Family::weibull:
      return -std::expm1(-std::pow(t / scale_, shape_));
  }
  throw_invalid("unknown family tag");
}

double Component::hazard(double t) const {
  require_positive_time(t);
  if (family_ == Family::weibull) {
    // Closed form (shape/scale) * (t/scale)^(shape-1).
    return (shape_ / scale_) * std::pow(t / scale_, shape_ - 1.0);
  }
  const double s = survival(t);
  if (s <= 0.0) {
    throw_numeric("hazard undefined: survival underflowed to zero at t=" +
                  std::to_string(t));
  }
  return std::exp(log_pdf(t)) / s;
}

double Component::sample(Rng& rng) const {
  switch (family_) {
    case Family::lognormal:
      return std::exp(meanlog_ + std::sqrt(varlog_) * rng.normal());
    case Family::gamma:
      return rng.gamma(shape_, scale_);
    case Family::weibull:
      return scale_ * std::pow(-std::log(rng.uniform()), 1.0 / shape_);
  }
  throw_invalid("unknown family tag");
}

double log_pdf(Family f, const Moments& m, double t) {
  return Component(f, m).log_pdf(t);
}

double survival(Family f, const Moments& m, double t) {
  return Component(f, m).survival(t);
}

double hazard(Family f, const Moments& m, double t) {
  return Component(f, m).hazard(t);
}

std::vector<double> sample(Family f, const Moments& m, Rng& rng, std::size_t n) {
  if (n == 0) throw_invalid("sample count must be >= 1");
  Component comp(f, m);
  std::vector<double> out(n);
  for (auto& x : out) x = comp.sample(rng);
  return out;
}

}  // namespace survmix
