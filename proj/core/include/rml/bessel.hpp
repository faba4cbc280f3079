#pragma once

#include <complex>

namespace rml {

/// Surface area of the unit sphere S^k embedded in R^{k+1}.
double sphere_area(int k);

/// Volume of the unit ball in R^d.
double ball_volume(int d);

/// Normalized sphere-average kernel
///
///   lambda_kernel(gamma, z) = \int_{-1}^{1} e^{i z t} (1-t^2)^gamma dt
///                           = sqrt(pi) Gamma(gamma+1) (2/z)^{gamma+1/2} J_{gamma+1/2}(z),
///
/// real and even in z. Valid for gamma > -1, z >= 0. Power series below the
/// crossover, Hankel asymptotics above; half-integer orders terminate exactly.
double lambda_kernel(double gamma, double z);

/// Fourier transform of the surface measure of the unit sphere in R^d,
/// as a function of s = |xi| (with the e^{i<x,xi>} phase, so no 2*pi here):
///
///   bd_kernel(d, s) = \int_{S^{d-1}} e^{i s <e,theta>} dsigma(theta)
///                   = (2 pi)^{d/2} s^{-(d-2)/2} J_{(d-2)/2}(s).
///
/// bd_kernel(d, 0) equals the surface area of S^{d-1}; the decay is
/// O(s^{-(d-1)/2}). Throws domain_error for d < 2 or s < 0.
double bd_kernel(int d, double s);

/// P and Q coefficients of the Hankel asymptotic expansion,
/// J_nu(z) ~ sqrt(2/(pi z)) [P cos w - Q sin w], w = z - nu pi/2 - pi/4.
/// Only valid in the asymptotic regime (z >= bessel_asymptotic_min(nu)).
struct BesselPQ {
    double p;
    double q;
};
BesselPQ bessel_pq(double nu, double z);

/// Crossover point between the power series and the asymptotic expansion.
double bessel_asymptotic_min(double nu);

/// J_nu(z) for real order nu > -1 and z >= 0.
double bessel_j(double nu, double z);

} // namespace rml
