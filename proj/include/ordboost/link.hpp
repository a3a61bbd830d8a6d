#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ordboost {

// Noise distribution of the latent variable. The CDF maps a latent offset to
// a cumulative probability; probit = standard normal, logit = standard
// logistic, cloglog = Gumbel-type (asymmetric).
enum class LinkKind { Probit, Logit, Cloglog };

inline std::string to_string(LinkKind link) {
    switch (link) {
        case LinkKind::Probit: return "probit";
        case LinkKind::Logit: return "logit";
        case LinkKind::Cloglog: return "cloglog";
    }
    throw std::logic_error("unreachable LinkKind");
}

inline LinkKind link_from_string(const std::string& s) {
    if (s == "probit") return LinkKind::Probit;
    if (s == "logit") return LinkKind::Logit;
    if (s == "cloglog") return LinkKind::Cloglog;
    throw std::invalid_argument("unknown link function: '" + s + "' (expected probit, logit or cloglog)");
}

namespace detail {

// Inverse standard-normal CDF, Acklam's rational approximation (~1e-9),
// refined by one Newton step against the implemented cdf below.
inline double probit_quantile_approx(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// CDF of the link distribution, total on the extended reals.
// |t| > 40 saturates to exactly 0/1; downstream probability clamping absorbs
// the resulting zero-width class intervals.
inline double cdf(LinkKind link, double t) {
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    if (t > 40.0) return 1.0;
    if (t < -40.0) return 0.0;
    switch (link) {
        case LinkKind::Probit:
            return 0.5 * std::erfc(-t / std::sqrt(2.0));
        case LinkKind::Logit:
            return 1.0 / (1.0 + std::exp(-t));
        case LinkKind::Cloglog:
            return -std::expm1(-std::exp(t));
    }
    throw std::logic_error("unreachable LinkKind");
}

inline double pdf(LinkKind link, double t) {
    if (std::isinf(t)) return 0.0;
    switch (link) {
        case LinkKind::Probit:
            return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::acos(-1.0));
        case LinkKind::Logit: {
            double e = std::exp(-std::abs(t));
            double s = 1.0 + e;
            return e / (s * s);
        }
        case LinkKind::Cloglog:
            return std::exp(t - std::exp(t));
    }
    throw std::logic_error("unreachable LinkKind");
}

// Quantile; p must lie strictly inside (0, 1).
inline double inverse_cdf(LinkKind link, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_cdf: p must be in (0,1), got " + std::to_string(p));
    switch (link) {
        case LinkKind::Probit: {
            double x = detail::probit_quantile_approx(p);
            // One Newton step against the implemented cdf keeps the pair
            // self-consistent to ~1e-15.
            double f = cdf(LinkKind::Probit, x) - p;
            double d = pdf(LinkKind::Probit, x);
            if (d > 0.0) x -= f / d;
            return x;
        }
        case LinkKind::Logit:
            return std::log(p / (1.0 - p));
        case LinkKind::Cloglog:
            return std::log(-std::log1p(-p));
    }
    throw std::logic_error("unreachable LinkKind");
}

}  // namespace ordboost
