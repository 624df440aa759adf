// SPDX-License-Identifier: Apache-2.0
#include "oufpt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oufpt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void require_valid_line(double a1, double b1) {
    if (!(std::isfinite(a1) && a1 < 0.0) || !(std::isfinite(b1) && b1 > 0.0)) {
        throw InvalidLine("line must have a1 < 0 and b1 > 0");
    }
}

// log g01, defined for s > 0; tends to -inf at s -> 0+.
double log_g01(double s, double a1, double b1) {
    const double arg = a1 + b1 * s;
    return std::log(-a1) - 0.5 * (kLogTwoPi + 3.0 * std::log(s)) -
           arg * arg / (2.0 * s);
}

}  // namespace

double g01(double s, double a1, double b1) {
    require_valid_line(a1, b1);
    if (!(std::isfinite(s) && s > 0.0)) {
        throw NonPositiveTime("g01 requires s > 0");
    }
    return std::exp(log_g01(s, a1, b1));
}

double g12(double s_prime, double s, double start, double a2) {
    if (!(std::isfinite(s) && std::isfinite(s_prime) && s > 0.0 && s_prime > s)) {
        throw TimeOrderViolation("g12 requires s' > s > 0");
    }
    const double gap = s_prime - s;
    const double dist = std::abs(start - a2);
    if (dist == 0.0) {
        return 0.0;
    }
    return dist / std::sqrt(kTwoPi * gap * gap * gap) *
           std::exp(-dist * dist / (2.0 * gap));
}

QuadratureResult g2_quadrature(const SqrtBoundary& bdy, double s_prime,
                               double rel_tol, std::size_t max_evaluations) {
    const PiecewiseLinearFrame frame = build_frame(bdy, s_prime);
    const double lo = frame.s_star;
    const double hi = frame.s_prime;

    std::size_t evaluations = 0;
    const auto log_integrand = [&](double s) {
        // l1(s) - a2 > 0 strictly inside (s*, s'); both endpoint limits are 0.
        const double d = frame.line1(s) - frame.a2;
        if (d <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        const double gap = hi - s;
        return log_g01(s, frame.a1, frame.b1) + std::log(d) -
               0.5 * (kLogTwoPi + 3.0 * std::log(gap)) - d * d / (2.0 * gap);
    };

    // Locate the scale of the integrand so the adaptive pass can work on
    // exp(log f - shift), which is O(1).  The exponent can swing by 1e6+ log
    // units across the interval for stiff parameters, so the scan refines
    // around the running argmax a few times.
    constexpr int kScanPoints = 257;
    double shift = -std::numeric_limits<double>::infinity();
    double scan_lo = lo, scan_hi = hi;
    for (int level = 0; level < 4; ++level) {
        const double width = scan_hi - scan_lo;
        double best = -std::numeric_limits<double>::infinity();
        double best_s = 0.5 * (scan_lo + scan_hi);
        for (int i = 1; i < kScanPoints; ++i) {
            const double s = scan_lo + width * i / kScanPoints;
            const double v = log_integrand(s);
            ++evaluations;
            if (v > best) {
                best = v;
                best_s = s;
            }
        }
        shift = std::max(shift, best);
        const double cell = width / kScanPoints;
        scan_lo = std::max(lo, best_s - cell);
        scan_hi = std::min(hi, best_s + cell);
    }
    if (!std::isfinite(shift)) {
        throw QuadratureNonConvergence("integrand scale scan failed", 0.0);
    }

    const auto shifted = [&](double s) {
        if (++evaluations > max_evaluations) {
            throw QuadratureNonConvergence(
                "evaluation budget exhausted before reaching tolerance",
                std::numeric_limits<double>::quiet_NaN());
        }
        if (s <= lo || s >= hi) {
            return 0.0;  // endpoint limits; never evaluate the raw 0*inf forms
        }
        const double v = log_integrand(s) - shift;
        if (v > 690.0) {
            throw QuadratureNonConvergence(
                "scale scan missed the integrand peak", v);
        }
        return std::exp(v);
    };

    double abs_error = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            shifted, lo, hi, 15, rel_tol * 0.1, &abs_error);
    if (!(integral > 0.0) || !std::isfinite(integral)) {
        throw QuadratureNonConvergence("integral not positive/finite", abs_error);
    }
    const double rel_error = abs_error / integral;
    if (!(rel_error <= rel_tol)) {
        throw QuadratureNonConvergence("tolerance not reached", rel_error);
    }

    QuadratureResult out{};
    out.log_value = shift + std::log(integral);
    out.value = std::exp(out.log_value);
    out.rel_error = rel_error;
    out.evaluations = evaluations;
    return out;
}

OptimizationWitness mmax(double b_value) {
    if (!(std::isfinite(b_value) && b_value > 0.0)) {
        throw NonPositiveB("B must be finite and > 0");
    }
    const double root = std::sqrt(b_value * b_value + 2.0 * b_value);
    // 1 - C = 1 + B - sqrt(B^2 + 2B), rationalized to avoid cancellation.
    const double one_minus_c = 1.0 / (1.0 + b_value + root);
    const double c_value = 1.0 - one_minus_c;
    const double nu_plus = std::sqrt(one_minus_c);
    OptimizationWitness w{};
    w.b_value = b_value;
    w.c_value = c_value;
    w.nu_plus = nu_plus;
    w.eta_plus = 0.5 * nu_plus;
    w.m_max = 0.25 * one_minus_c * std::exp(-2.0 * b_value / c_value);
    return w;
}

double lemma4_threshold(const OUParams& p) {
    const double ratio = p.x0 / p.theta;
    return std::max({8.0, 1.0 + ratio * ratio,
                     8.0 * p.sigma * p.sigma / (p.beta * p.theta * p.theta)});
}

double lemma4_log_bound(const OUParams& p, double s_prime) {
    const double threshold = lemma4_threshold(p);
    if (!(std::isfinite(s_prime) && s_prime > threshold)) {
        throw HypothesisNotMet("s' must exceed max(8, 1 + x0^2/theta^2, "
                               "8 sigma^2/(beta theta^2))",
                               threshold);
    }
    const double log_prefactor =
        std::log(512.0 / (9.0 * M_PI)) + std::log((p.x0 - p.theta) / p.theta);
    const double h = p.beta / 32.0 * (p.theta / p.sigma) * (p.theta / p.sigma);
    return log_prefactor - 6.0 * std::log(s_prime) -
           h * s_prime * s_prime * s_prime;
}

double BoundCertificate::log_bound_at(double t) const {
    if (!(std::isfinite(t) && t > u)) {
        throw BelowOnset("bound is certified only for t > u");
    }
    // p e^{6 beta t} composed in log space; -inf only when the true value is
    // below the smallest representable double.
    return std::log(k) - std::exp(std::log(p) + 6.0 * beta * t);
}

BoundCertificate remark_constants(const OUParams& p) {
    BoundCertificate cert{};
    cert.beta = p.beta;
    cert.cap_k = 512.0 / (9.0 * M_PI) * (p.x0 - p.theta) / p.theta;
    cert.cap_h = p.beta / 32.0 * (p.theta / p.sigma) * (p.theta / p.sigma);
    cert.k = 2.0 * p.beta * cert.cap_k;
    cert.p = 1.0 + cert.cap_h;
    cert.u = std::log1p(lemma4_threshold(p)) / (2.0 * p.beta);
    return cert;
}

double theorem_log_bound(const BoundCertificate& cert, double t) {
    return cert.log_bound_at(t);
}

double rho_b_to_rho_x(const OUParams& params,
                      const std::function<double(double)>& rho_b_at, double t) {
    if (!(std::isfinite(t) && t >= 0.0)) {
        throw NegativeTime("time must be finite and >= 0");
    }
    const double s = std::expm1(2.0 * params.beta * t);
    return 2.0 * params.beta * (s + 1.0) * rho_b_at(s);
}

}  // namespace oufpt
