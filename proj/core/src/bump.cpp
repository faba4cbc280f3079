#include "rml/bump.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "rml/bessel.hpp"
#include "rml/errors.hpp"
#include "rml/hankel.hpp"
#include "rml/quadrature.hpp"

namespace rml {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Mollifier of radius 1/2, normalized to unit mass in R^d. The sharpness
// beta = 9 balances the transform's e^{-c sqrt(beta zeta)} decay against the
// rho^{2M} growth of the Laplacian factor, keeping the usable frequency
// cutoff of psi_hat near rho ~ 80 instead of several hundred.
struct BaseMollifier {
    double mass_inv;
    double operator()(double rho) const {
        const double t = 2.0 * rho;
        if (t * t >= 1.0) return 0.0;
        return mass_inv * std::exp(-9.0 / (1.0 - t * t));
    }
};

BaseMollifier make_mollifier(int d) {
    BaseMollifier m{1.0};
    const double raw =
        sphere_area(d - 1) *
        integrate_real([&m, d](double rho) { return m(rho) * std::pow(rho, d - 1); },
                       0.0, 0.5, {.rel_tol = 1e-13})
            .value.real();
    m.mass_inv = 1.0 / raw;
    return m;
}

// Transform of the unit-mass mollifier on a zeta grid; chi = phi * phi has
// chi_hat = phi_hat^2 >= 0, so chi stays supported in the unit ball while its
// transform has no sign changes.
std::vector<double> tabulate_phi_hat(int d, const std::vector<double>& zetas) {
    const BaseMollifier phi = make_mollifier(d);
    std::vector<double> out(zetas.size());
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        const double z = zetas[i];
        out[i] = integrate_real(
                     [&](double rho) {
                         return phi(rho) * std::pow(rho, d - 1) *
                                bd_kernel(d, kTwoPi * rho * z);
                     },
                     0.0, 0.5, {.rel_tol = 1e-12, .max_frequency = kTwoPi * z})
                     .value.real();
    }
    return out;
}

} // namespace

Bump::Bump(const BumpSpec& spec)
    : spec_(spec),
      psi0_hat_(2, {0.0, 1.0}, {{0, 0}, {0, 0}}),
      psi0_spatial_(2, {0.0, 1.0}, {{0, 0}, {0, 0}}),
      psi_hat_(2, {0.0, 1.0}, {{0, 0}, {0, 0}}),
      psi_spatial_(2, {0.0, 1.0}, {{0, 0}, {0, 0}}) {
    const int d = spec_.dim;
    if (d < 2) throw domain_error("Bump: dimension must be >= 2");
    if (!(spec_.support_radius > 0) || spec_.support_radius > 0.1 + 1e-12)
        throw domain_error("Bump: support_radius must lie in (0, 1/10]");
    if (spec_.vanishing_order < 0) throw domain_error("Bump: vanishing_order < 0");
    if (spec_.scale * spec_.support_radius < 1.0 - 1e-12)
        throw domain_error("Bump: scale too small for the requested support radius");

    const double lam = spec_.scale;
    const int M = spec_.vanishing_order;
    const double pi2 = 0.25 * kTwoPi * kTwoPi; // pi^2

    auto psi0_hat_at = [&](double rho, double chihat) {
        return std::pow(-4.0 * pi2 * rho * rho / (lam * lam), M) * chihat;
    };

    // Extend the frequency grid until the psi_hat^2-weighted mass has a
    // negligible tail. The geometric head keeps the spline's RELATIVE
    // accuracy near 0, where the profile behaves like rho^{2M}.
    auto build_grid = [](double zeta_max) {
        std::vector<double> g;
        g.push_back(0.0);
        for (double z : geomspace(1e-5, 0.5, 140)) g.push_back(z);
        const std::size_t n = static_cast<std::size_t>((zeta_max - 0.5) * 160) + 2;
        auto lin = linspace(0.5, zeta_max, n);
        for (std::size_t i = 1; i < lin.size(); ++i) g.push_back(lin[i]);
        return g;
    };
    double zeta_max = 2.0;
    std::vector<double> zetas;
    std::vector<double> phi_hat;
    for (int attempt = 0; attempt < 8; ++attempt) {
        zetas = build_grid(zeta_max);
        phi_hat = tabulate_phi_hat(d, zetas);
        const std::size_t n = zetas.size();
        double peak = 0.0, tail = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = lam * zetas[i];
            const double v =
                std::pow(std::abs(psi0_hat_at(rho, phi_hat[i] * phi_hat[i])), 4) *
                std::pow(rho, d - 1);
            peak = std::max(peak, v);
            if (zetas[i] > 0.75 * zeta_max) tail = std::max(tail, v);
        }
        if (tail < 1e-15 * peak && attempt > 0) break;
        zeta_max *= 1.6;
    }

    std::vector<double> rho_grid(zetas.size());
    std::vector<std::complex<double>> p0h(zetas.size()), ph(zetas.size());
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        rho_grid[i] = lam * zetas[i];
        const double v = psi0_hat_at(rho_grid[i], phi_hat[i] * phi_hat[i]);
        p0h[i] = v;
        ph[i] = v * v;
    }
    psi0_hat_ = RadialProfile(d, rho_grid, std::move(p0h));
    psi_hat_ = RadialProfile(d, rho_grid, std::move(ph));

    // Frequency cutoff where psi_hat^2 rho^{d-1} drops below 1e-15 of its peak.
    {
        double peak = 0.0;
        std::vector<double> weight(rho_grid.size());
        for (std::size_t i = 0; i < rho_grid.size(); ++i) {
            weight[i] = std::norm(psi_hat_.values()[i]) * std::pow(rho_grid[i], d - 1);
            peak = std::max(peak, weight[i]);
        }
        freq_cutoff_ = rho_grid.back();
        for (std::size_t i = rho_grid.size(); i-- > 1;) {
            if (weight[i] > 1e-15 * peak) {
                freq_cutoff_ = rho_grid[std::min(i + 1, rho_grid.size() - 1)];
                break;
            }
        }
    }

    if (spec_.require_nonvanishing && M > 0) {
        for (double rho = 0.25; rho <= 4.0; rho += 1e-3) {
            if (std::abs(psi0_hat_(rho)) < 1e-14)
                throw domain_error("Bump: psi_o_hat vanishes near frequency " +
                                   std::to_string(rho));
        }
    }

    // Spatial profiles by inverse transform; the support is known analytically
    // and verified on the numerical profile.
    {
        const double r0 = spec_.support_radius;
        auto sp0 = hankel_inverse(psi0_hat_, linspace(0.0, 1.10 * r0, 500),
                                  {.rel_tol = 1e-11});
        psi0_spatial_ = std::move(sp0.profile);
        const double inside = psi0_spatial_.max_abs();
        double outside = 0.0;
        for (std::size_t i = 0; i < psi0_spatial_.size(); ++i)
            if (psi0_spatial_.grid()[i] > r0)
                outside = std::max(outside, std::abs(psi0_spatial_.values()[i]));
        if (outside > 1e-7 * inside)
            throw numeric_error("Bump: psi_o leaks beyond its declared support");

        auto sp = hankel_inverse(psi_hat_, linspace(0.0, psi_support(), 800),
                                 {.rel_tol = 1e-11});
        psi_spatial_ = std::move(sp.profile);
    }
}

double Bump::psi_value(double s) const {
    if (s < 0 || s >= psi_support()) return 0.0;
    return psi_spatial_(s).real();
}

double Bump::psi_hat_value(double rho) const {
    if (rho < 0 || rho > psi_hat_.rho_max()) return 0.0;
    return psi_hat_(rho).real();
}

std::pair<RadialProfile, RadialProfile> make_bump(const BumpSpec& spec) {
    Bump b(spec);
    return {b.psi0_spatial(), b.psi0_hat()};
}

std::shared_ptr<const Bump> default_bump(int dim, int vanishing_order) {
    static std::map<std::pair<int, int>, std::shared_ptr<const Bump>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(dim, vanishing_order);
    auto it = cache.find(key);
    if (it == cache.end()) {
        BumpSpec s;
        s.dim = dim;
        s.vanishing_order = vanishing_order;
        it = cache.emplace(key, std::make_shared<Bump>(s)).first;
    }
    return it->second;
}

} // namespace rml
