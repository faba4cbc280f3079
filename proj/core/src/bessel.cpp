#include "rml/bessel.hpp"

#include <cmath>

#include "rml/errors.hpp"

namespace rml {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// (2/z)^nu J_nu(z) via the defining power series; free of the z^nu prefactor
// so it is smooth through z = 0.
double scaled_j_series(double nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0 / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-19 * (std::abs(sum) + 1e-300) && k > 4) break;
    }
    return sum;
}

// sinc-type kernels for the odd-dimensional closed forms, stable near 0.
inline double lam0(double z) { // int e^{izt} dt = 2 sin z / z
    if (z < 1e-3) {
        const double z2 = z * z;
        return 2.0 * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0)));
    }
    return 2.0 * std::sin(z) / z;
}

inline double lam1(double z) { // int e^{izt} (1-t^2) dt = 4 (sin z - z cos z) / z^3
    if (z < 2e-2) {
        const double z2 = z * z;
        return 4.0 / 3.0 *
               (1.0 - z2 / 10.0 * (1.0 - z2 / 28.0 * (1.0 - z2 / 54.0)));
    }
    return 4.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
}

// (2/z)^nu J_nu(z) for integer nu in the asymptotic regime.
inline double scaled_j_asymptotic(double nu, double z) {
    const auto [p, q] = bessel_pq(nu, z);
    const double w = z - 0.5 * nu * kPi - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(w) - q * std::sin(w)) *
           std::pow(2.0 / z, nu);
}

} // namespace

double sphere_area(int k) {
    if (k < 0) throw domain_error("sphere_area: k must be >= 0");
    return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double ball_volume(int d) {
    if (d < 1) throw domain_error("ball_volume: d must be >= 1");
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double bessel_asymptotic_min(double nu) {
    // Below ~12 the asymptotic series bottoms out above ~1e-11 while the
    // power series still cancels harmlessly; larger orders switch later.
    return std::max(12.0, 1.5 * nu * nu);
}

BesselPQ bessel_pq(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    const double inv8z = 1.0 / (8.0 * z);
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double f = 2.0 * k - 1.0;
        term *= (mu - f * f) * inv8z / k;
        const double mag = std::abs(term);
        if (mag > prev) break; // divergent tail of the asymptotic series
        prev = mag;
        const int r = k % 4;
        if (r == 0) p += term;
        else if (r == 1) q += term;
        else if (r == 2) p -= term;
        else q -= term;
        if (mag < 1e-18) break;
    }
    return {p, q};
}

double bessel_j(double nu, double z) {
    if (z < 0) throw domain_error("bessel_j: z must be >= 0");
    if (nu <= -1) throw domain_error("bessel_j: order must be > -1");
    if (z < bessel_asymptotic_min(nu))
        return scaled_j_series(nu, z) * std::pow(0.5 * z, nu);
    const auto [p, q] = bessel_pq(nu, z);
    const double w = z - 0.5 * nu * kPi - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(w) - q * std::sin(w));
}

double lambda_kernel(double gamma, double z) {
    if (gamma <= -1) throw domain_error("lambda_kernel: gamma must be > -1");
    if (z < 0) throw domain_error("lambda_kernel: z must be >= 0");
    if (gamma == 0.0) return lam0(z);
    if (gamma == 1.0) return lam1(z);
    const double nu = gamma + 0.5;
    const double c = std::sqrt(kPi) * std::tgamma(gamma + 1.0);
    if (z < bessel_asymptotic_min(nu)) return c * scaled_j_series(nu, z);
    return c * scaled_j_asymptotic(nu, z);
}

double bd_kernel(int d, double s) {
    if (d < 2) throw domain_error("bd_kernel: dimension must be >= 2");
    if (s < 0) throw domain_error("bd_kernel: s must be >= 0");
    switch (d) {
        case 2: // 2 pi J_0(s)
            return kTwoPi * (s < 12.0 ? scaled_j_series(0.0, s)
                                      : scaled_j_asymptotic(0.0, s));
        case 3: // 4 pi sin(s) / s
            return kTwoPi * lam0(s);
        case 4: // (2 pi)^2 J_1(s) / s
            return kTwoPi * kTwoPi * 0.5 *
                   (s < 12.0 ? scaled_j_series(1.0, s) : scaled_j_asymptotic(1.0, s));
        case 5: // 8 pi^2 (sin s - s cos s) / s^3
            return kTwoPi * kPi * lam1(s);
        case 6: // (2 pi)^3 J_2(s) / s^2
            return kTwoPi * kTwoPi * kTwoPi * 0.25 *
                   (s < 12.0 ? scaled_j_series(2.0, s) : scaled_j_asymptotic(2.0, s));
        default:
            return sphere_area(d - 2) * lambda_kernel(0.5 * (d - 3), s);
    }
}

} // namespace rml
