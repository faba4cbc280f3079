#pragma once

#include <utility>
#include <vector>

#include "rml/radial_profile.hpp"

namespace rml {

/// L^p(R^d) norm of the radial extension of f:
///
///   ( |S^{d-1}| \int_0^inf |f(rho)|^p rho^{d-1} drho )^{1/p}.
///
/// A declared algebraic tail is integrated in closed form; when the tail
/// integral diverges (exponent * p + d >= 0) the result is +infinity rather
/// than an error. p must be positive.
double lp_norm_radial(const RadialProfile& f, double p, double rel_tol = 1e-9);

struct LorentzExponents {
    double p;
    double nu; // may be +infinity
};

/// Lorentz L^{p,nu} quasi-norm of a finite discrete measure given as
/// (value, weight) atoms, computed exactly from the decreasing rearrangement:
///
///   ( (nu/p) \int_0^inf (t^{1/p} f*(t))^nu dt/t )^{1/nu},
///
/// with the normalization chosen so that nu = p reproduces the weighted
/// l^p norm exactly and the norm is nonincreasing in nu.
double lorentz_norm(std::vector<std::pair<double, double>> samples,
                    const LorentzExponents& e);

/// Radial rearrangement helper: discretizes |f| against the measure
/// |S^{d-1}| rho^{d-1} drho on the profile's grid and applies lorentz_norm.
double lorentz_norm_radial(const RadialProfile& f, const LorentzExponents& e);

} // namespace rml
