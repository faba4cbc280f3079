#include "rml/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rml/bessel.hpp"
#include "rml/errors.hpp"
#include "rml/quadrature.hpp"

namespace rml {

double lp_norm_radial(const RadialProfile& f, double p, double rel_tol) {
    if (!(p > 0)) throw domain_error("lp_norm_radial: p must be positive");
    const int d = f.dim();
    const double area = sphere_area(d - 1);

    double tail_term = 0.0;
    if (f.tail() && f.tail()->amplitude > 0) {
        const double ep = f.tail()->exponent * p + d;
        if (ep >= 0) return std::numeric_limits<double>::infinity();
        tail_term = area * std::pow(f.tail()->amplitude, p) *
                    std::pow(f.rho_max(), ep) / (-ep);
    }

    // |f|^p is only piecewise smooth (kinks at zero crossings for small p);
    // the sampled grid bounds the structure the integrator has to resolve.
    double grid_freq = 0.0;
    const auto& g = f.grid();
    for (std::size_t i = 1; i < g.size(); ++i)
        grid_freq = std::max(grid_freq, 1.0 / (g[i] - g[i - 1]));

    QuadratureOptions q;
    q.rel_tol = rel_tol;
    q.max_frequency = 3.0 * grid_freq;
    const auto res = integrate_real(
        [&](double rho) {
            return std::pow(std::abs(f(rho)), p) * std::pow(rho, d - 1);
        },
        f.rho_min(), f.rho_max(), q);
    return std::pow(area * res.value.real() + tail_term, 1.0 / p);
}

double lorentz_norm(std::vector<std::pair<double, double>> samples,
                    const LorentzExponents& e) {
    if (!(e.p > 0)) throw domain_error("lorentz_norm: p must be positive");
    if (!(e.nu > 0)) throw domain_error("lorentz_norm: nu must be positive");
    for (auto& s : samples) {
        s.first = std::abs(s.first);
        if (!(s.second > 0)) throw domain_error("lorentz_norm: weights must be positive");
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    if (std::isinf(e.nu)) {
        double t = 0.0, sup = 0.0;
        for (const auto& [v, w] : samples) {
            t += w;
            sup = std::max(sup, std::pow(t, 1.0 / e.p) * v);
        }
        return sup;
    }

    const double r = e.nu / e.p;
    double t_prev = 0.0, t_pow_prev = 0.0, acc = 0.0;
    for (const auto& [v, w] : samples) {
        const double t = t_prev + w;
        const double t_pow = std::pow(t, r);
        acc += std::pow(v, e.nu) * (t_pow - t_pow_prev);
        t_prev = t;
        t_pow_prev = t_pow;
    }
    // acc = nu/p * int (t^{1/p} f*)^nu dt/t  after the exact step integration:
    // int_{t0}^{t1} t^{nu/p - 1} dt = (p/nu) (t1^{nu/p} - t0^{nu/p}).
    return std::pow(acc, 1.0 / e.nu);
}

double lorentz_norm_radial(const RadialProfile& f, const LorentzExponents& e) {
    const auto& g = f.grid();
    const auto& v = f.values();
    const double area = sphere_area(f.dim() - 1);
    std::vector<std::pair<double, double>> samples;
    samples.reserve(g.size());
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double mid = 0.5 * (g[i] + g[i + 1]);
        const double weight = area * std::pow(mid, f.dim() - 1) * (g[i + 1] - g[i]);
        const double value = 0.5 * (std::abs(v[i]) + std::abs(v[i + 1]));
        if (value > 0 && weight > 0) samples.emplace_back(value, weight);
    }
    return lorentz_norm(std::move(samples), e);
}

} // namespace rml
