#pragma once

#include <memory>
#include <utility>

#include "rml/radial_profile.hpp"

namespace rml {

/// Recipe for the mollifier pair psi_o (order-M Laplacian of a scaled base
/// bump) and psi = psi_o * psi_o. The base chi is a fixed smooth radial bump
/// supported in the unit ball with chi_hat(0) = 1 and chi_hat >= 0 (it is the
/// self-convolution of a mollifier of radius 1/2), so psi_o_hat keeps a
/// definite sign on the frequency window it is used on.
struct BumpSpec {
    int dim = 4;
    /// Support radius of psi_o; capped at 1/10 so shells stay thin.
    double support_radius = 0.1;
    /// Number of Laplacian applications M; psi_o_hat vanishes to order 2M.
    int vanishing_order = 3;
    /// Dilation lambda of the base bump; must satisfy scale * support_radius >= 1.
    double scale = 10.0;
    /// Verify psi_o_hat != 0 on [1/4, 4] (needed when the bump seeds the
    /// reference test function eta).
    bool require_nonvanishing = true;
};

/// Constructed bump: frequency profiles are evaluated spectrally,
///   psi_o_hat(rho) = (-4 pi^2 rho^2 / lambda^2)^M chi_hat(rho / lambda),
/// spatial profiles by the inverse radial transform.
class Bump {
public:
    explicit Bump(const BumpSpec& spec);

    const BumpSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }

    const RadialProfile& psi0_hat() const { return psi0_hat_; }
    const RadialProfile& psi0_spatial() const { return psi0_spatial_; }
    /// psi_hat = psi_o_hat^2 (transform of psi = psi_o * psi_o).
    const RadialProfile& psi_hat() const { return psi_hat_; }
    const RadialProfile& psi_spatial() const { return psi_spatial_; }

    /// Radius of supp psi = 2 * support_radius.
    double psi_support() const { return 2.0 * spec_.support_radius; }
    /// Frozen half-width of the shell annuli: twice the psi support radius
    /// (safety factor 2), 2/5 under the default 1/10 support.
    double annulus_halfwidth() const { return 4.0 * spec_.support_radius; }
    /// Frequency beyond which psi_hat^2 rho^{d-1} is below 1e-15 of its peak.
    double freq_cutoff() const { return freq_cutoff_; }

    /// Spatial profile of psi, exactly zero beyond psi_support().
    double psi_value(double s) const;
    /// psi_hat evaluated with its sign (nonnegative), zero beyond the grid.
    double psi_hat_value(double rho) const;

private:
    BumpSpec spec_;
    RadialProfile psi0_hat_;
    RadialProfile psi0_spatial_;
    RadialProfile psi_hat_;
    RadialProfile psi_spatial_;
    double freq_cutoff_ = 0.0;
};

/// Spec-level constructor: returns (psi_o spatial profile, psi_o_hat
/// frequency profile) and runs the construction-time checks.
std::pair<RadialProfile, RadialProfile> make_bump(const BumpSpec& spec);

/// Shared default bump per (dim, M), cached.
std::shared_ptr<const Bump> default_bump(int dim, int vanishing_order = 3);

} // namespace rml
