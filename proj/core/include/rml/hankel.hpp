#pragma once

#include <vector>

#include "rml/radial_profile.hpp"

namespace rml {

struct HankelResult {
    RadialProfile profile;
    /// Largest per-point quadrature error estimate, plus the bound on the
    /// neglected tail when the input declares one.
    double quad_error = 0.0;
};

struct HankelOptions {
    double rel_tol = 1e-11;
    /// Tail exponent to attach to the output profile, if known by the caller.
    std::optional<double> out_tail_exponent;
};

/// Radial profile of the d-dimensional Fourier transform of x -> f(|x|),
/// under the unitary convention with phase e^{-2 pi i <x,xi>}:
///
///   out(xi) = \int_0^inf f(rho) rho^{d-1} bd_kernel(d, 2 pi rho xi) drho.
///
/// Requires absolute convergence: compact support (no tail model) or a tail
/// exponent below -d. The transform of a radial function is its own inverse
/// under this convention; hankel_inverse is the same operator and is provided
/// for call-site readability with frequency-side inputs.
HankelResult hankel_forward(const RadialProfile& f, const std::vector<double>& out_grid,
                            const HankelOptions& opt = {});
HankelResult hankel_inverse(const RadialProfile& f, const std::vector<double>& out_grid,
                            const HankelOptions& opt = {});

} // namespace rml
