#pragma once

#include <complex>
#include <span>

#include "rml/bump.hpp"
#include "rml/radial_profile.hpp"

namespace rml {

/// Radial profile of the mollified sphere sigma_r * psi about its center,
/// supported in [r - w0, r + w0] with w0 the psi support radius.
struct ShellProfile {
    double r;
    RadialProfile profile;
    /// L2 disagreement between the two construction routes when the
    /// cross-check ran (surface integral vs inverse transform), else 0.
    double consistency = 0.0;
};

enum class ShellVerify { none, cross_check };

/// Builds the profile by the direct surface integral
///   (sigma_r * psi)(x) = |S^{d-2}| r^{d-1} \int_0^pi Psi(u(phi)) sin(phi)^{d-2} dphi,
///   u(phi) = sqrt(|x|^2 + r^2 - 2 r |x| cos phi),
/// restricted to the angular window where Psi is supported. With
/// ShellVerify::cross_check the same profile is recomputed as the inverse
/// transform of sigma_r_hat * psi_hat and the two must agree to 1e-5
/// relative in L2 (numeric_error otherwise); the surface-integral result is
/// returned either way.
ShellProfile shell_profile(double r, const Bump& bump,
                           ShellVerify verify = ShellVerify::cross_check);

/// True when the supports of the two shells cannot intersect: the annuli are
/// nested (|r1 - r2| > |y1 - y2| + 2 w) or far apart (|y1 - y2| > r1 + r2 + 2 w),
/// with w the annulus half-width of the bump.
bool shells_disjoint(double dist, double r1, double r2, const Bump& bump);

struct GramOptions {
    double rel_tol = 1e-9;
};

/// Scalar product <F_{y,r}, F_{y',r'}> of two shells:
///
///   (r r')^{d-1} \int_0^inf B_d(2 pi r rho) B_d(2 pi r' rho) B_d(2 pi D rho)
///                 psi_hat(rho)^2 rho^{d-1} drho,     D = |y - y'|,
///
/// evaluated by oscillation-aware adaptive quadrature (combined frequency
/// 2 pi (r + r' + D)); exactly zero when the supports are disjoint.
std::complex<double> gram_entry(std::span<const double> y1, double r1,
                                std::span<const double> y2, double r2,
                                const Bump& bump, const GramOptions& opt = {});

/// Distance-form entry: the product depends on the geometry only through
/// (r1, r2, |y1-y2|).
double gram_entry_dist(double dist, double r1, double r2, const Bump& bump,
                       const GramOptions& opt = {});

} // namespace rml
