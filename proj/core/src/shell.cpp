#include "rml/shell.hpp"

#include <cmath>

#include "rml/bessel.hpp"
#include "rml/errors.hpp"
#include "rml/hankel.hpp"
#include "rml/quadrature.hpp"

namespace rml {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double surface_convolution(double s, double r, const Bump& bump) {
    const int d = bump.dim();
    const double w0 = bump.psi_support();
    if (std::abs(s - r) >= w0) return 0.0;
    if (s == 0.0) return sphere_area(d - 1) * std::pow(r, d - 1) * bump.psi_value(r);
    // Angular window where u(phi) <= w0.
    const double cos_phi0 = (s * s + r * r - w0 * w0) / (2.0 * r * s);
    const double phi0 = cos_phi0 >= 1.0 ? 0.0 : std::acos(std::max(cos_phi0, -1.0));
    if (phi0 <= 0.0) return 0.0;
    const double c = sphere_area(d - 2) * std::pow(r, d - 1);
    return c * gauss_fixed(
                   [&](double phi) {
                       const double u2 =
                           s * s + r * r - 2.0 * r * s * std::cos(phi);
                       return bump.psi_value(std::sqrt(std::max(u2, 0.0))) *
                              std::pow(std::sin(phi), d - 2);
                   },
                   0.0, phi0, 48);
}

} // namespace

ShellProfile shell_profile(double r, const Bump& bump, ShellVerify verify) {
    if (!(r >= 1.0)) throw domain_error("shell_profile: radius must be >= 1");
    const double w0 = bump.psi_support();
    // ~20 samples per wavelength of the fastest frequency present.
    const std::size_t n = 641;
    auto grid = linspace(r - w0, r + w0, n);
    std::vector<std::complex<double>> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = surface_convolution(grid[i], r, bump);
    ShellProfile out{r, RadialProfile(bump.dim(), grid, std::move(values)), 0.0};

    if (verify == ShellVerify::cross_check) {
        // Independent route: invert (sigma_r * psi)^ = sigma_r_hat psi_hat,
        // with both Bessel kernels evaluated exactly inside the quadrature
        // (only the smooth psi_hat profile is interpolated).
        const int d = bump.dim();
        const auto& ph = bump.psi_hat();
        const double cutoff = bump.freq_cutoff();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; i += 4) {
            const double s = grid[i];
            QuadratureOptions q;
            q.rel_tol = 1e-10;
            q.abs_tol = 1e-10 * std::pow(r, 0.5 * (d - 1));
            q.max_frequency = kTwoPi * (r + s);
            const double spectral =
                std::pow(r, d - 1) *
                integrate_real(
                    [&](double rho) {
                        return bd_kernel(d, kTwoPi * r * rho) * ph(rho).real() *
                               std::pow(rho, d - 1) * bd_kernel(d, kTwoPi * rho * s);
                    },
                    0.0, cutoff, q)
                    .value.real();
            const double diff = spectral - out.profile.values()[i].real();
            num += diff * diff;
            den += std::norm(out.profile.values()[i]);
        }
        out.consistency = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
        if (out.consistency > 1e-5)
            throw numeric_error("shell_profile: surface-integral and transform routes "
                                "disagree (relative L2 " +
                                std::to_string(out.consistency) + ")");
    }
    return out;
}

bool shells_disjoint(double dist, double r1, double r2, const Bump& bump) {
    const double w2 = 2.0 * bump.psi_support(); // = annulus_halfwidth
    return std::abs(r1 - r2) > dist + w2 || dist > r1 + r2 + w2;
}

double gram_entry_dist(double dist, double r1, double r2, const Bump& bump,
                       const GramOptions& opt) {
    if (!(r1 >= 1.0) || !(r2 >= 1.0))
        throw domain_error("gram_entry: radii must be >= 1");
    if (shells_disjoint(dist, r1, r2, bump)) return 0.0;
    const int d = bump.dim();
    const double cutoff = bump.freq_cutoff();
    const auto& ph = bump.psi_hat();

    // The entry itself is O((r1 r2)^{(d-1)/2}), so the integral (before the
    // (r1 r2)^{d-1} factor) is O((r1 r2)^{-(d-1)/2}); budget accordingly.
    QuadratureOptions q;
    q.rel_tol = opt.rel_tol;
    q.abs_tol = opt.rel_tol * std::pow(r1 * r2, -0.5 * (d - 1));
    q.max_frequency = kTwoPi * (r1 + r2 + dist);
    auto res = integrate_real(
        [&](double rho) {
            const double a2 = ph(rho).real(); // psi_hat >= 0
            return bd_kernel(d, kTwoPi * r1 * rho) * bd_kernel(d, kTwoPi * r2 * rho) *
                   bd_kernel(d, kTwoPi * dist * rho) * a2 * a2 *
                   std::pow(rho, d - 1);
        },
        0.0, cutoff, q);
    if (!res.converged)
        throw numeric_error("gram_entry: quadrature failed to converge (achieved " +
                            std::to_string(res.error) + ")");
    return std::pow(r1 * r2, d - 1) * res.value.real();
}

std::complex<double> gram_entry(std::span<const double> y1, double r1,
                                std::span<const double> y2, double r2,
                                const Bump& bump, const GramOptions& opt) {
    if (y1.size() != y2.size())
        throw usage_error("gram_entry: center dimension mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        const double diff = y1[i] - y2[i];
        d2 += diff * diff;
    }
    return {gram_entry_dist(std::sqrt(d2), r1, r2, bump, opt), 0.0};
}

} // namespace rml
