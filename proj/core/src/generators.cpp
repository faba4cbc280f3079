#include "rml/generators.hpp"

#include <cmath>
#include <set>

#include "rml/errors.hpp"
#include "rml/rng.hpp"

namespace rml {

PointFamily gen_uniform_family(int d, std::size_t n, int k, std::uint64_t seed) {
    // Box sized for moderate density: ~2 attempts per accepted point.
    const double box = std::max(2.0, 1.6 * std::pow(static_cast<double>(n), 1.0 / d));
    const double rlo = std::pow(2.0, k), rhi = std::pow(2.0, k + 1) - 1.0;
    Rng rng(seed);
    std::vector<double> flat;
    std::vector<std::vector<double>> pts;
    std::size_t guard = 0;
    while (pts.size() < n) {
        if (++guard > 2000 * n) throw numeric_error("gen_uniform_family: box too tight");
        std::vector<double> p(d + 1);
        for (int c = 0; c < d; ++c) p[c] = rng.uniform(0.0, box);
        p[d] = rng.uniform(rlo, std::max(rlo + 1e-9, rhi));
        bool ok = true;
        for (const auto& q : pts) {
            double s = 0.0;
            for (int c = 0; c <= d; ++c) s += (p[c] - q[c]) * (p[c] - q[c]);
            if (s < 1.0 + 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(std::move(p));
    }
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    return PointFamily(d, std::move(flat));
}

PointFamily gen_lattice3(int d, int m, int k) {
    if (d < 3) throw usage_error("gen_lattice3: need d >= 3");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m) * m * m * (d + 1));
    const double r = std::pow(2.0, k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                std::vector<double> y(d, 0.0);
                y[0] = i;
                y[1] = j;
                y[2] = l;
                flat.insert(flat.end(), y.begin(), y.end());
                flat.push_back(r);
            }
        }
    }
    return PointFamily(d, std::move(flat));
}

PointFamily gen_lattice4(int d, int m, int k) {
    if (d < 3) throw usage_error("gen_lattice4: need d >= 3");
    if (m > (1 << k)) throw usage_error("gen_lattice4: radius spread exceeds the shell");
    std::vector<double> flat;
    const double r0 = std::pow(2.0, k);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l)
                for (int t = 0; t < m; ++t) {
                    std::vector<double> y(d, 0.0);
                    y[0] = i;
                    y[1] = j;
                    y[2] = l;
                    flat.insert(flat.end(), y.begin(), y.end());
                    flat.push_back(r0 + t);
                }
    return PointFamily(d, std::move(flat));
}

PointFamily gen_annulus_family(int d, std::size_t n, int k, double R,
                               std::uint64_t seed) {
    Rng rng(seed);
    const double rlo = std::pow(2.0, k), rhi = std::pow(2.0, k + 1) - 1.0;
    std::vector<std::vector<double>> pts;
    std::size_t guard = 0;
    while (pts.size() < n) {
        if (++guard > 5000 * n)
            throw numeric_error("gen_annulus_family: sphere too crowded");
        auto dir = rng.unit_vector(d);
        const double rad = R + rng.uniform(-1.0, 1.0);
        std::vector<double> p(d + 1);
        for (int c = 0; c < d; ++c) p[c] = rad * dir[c];
        p[d] = rng.uniform(rlo, std::max(rlo + 1e-9, rhi));
        bool ok = true;
        for (const auto& q : pts) {
            double s = 0.0;
            for (int c = 0; c <= d; ++c) s += (p[c] - q[c]) * (p[c] - q[c]);
            if (s < 1.0 + 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(std::move(p));
    }
    std::vector<double> flat;
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    return PointFamily(d, std::move(flat));
}

PointFamily gen_large_radii_family(int d, std::size_t n, int ell, std::uint64_t seed) {
    Rng rng(seed);
    const long box = 1L << (ell + 3);
    const long rspan = 1L << ell;
    std::set<std::vector<long>> seen;
    std::vector<double> flat;
    std::size_t guard = 0;
    while (seen.size() < n) {
        if (++guard > 10000 * n + 1000)
            throw numeric_error("gen_large_radii_family: lattice too small");
        std::vector<long> p(d + 1);
        for (int c = 0; c < d; ++c) p[c] = static_cast<long>(rng.below(box));
        p[d] = rspan + static_cast<long>(rng.below(rspan));
        if (!seen.insert(p).second) continue;
        for (int c = 0; c <= d; ++c) flat.push_back(static_cast<double>(p[c]));
    }
    return PointFamily(d, std::move(flat));
}

std::vector<std::complex<double>> gen_coeffs(std::size_t n, bool unit_modulus,
                                             std::uint64_t seed) {
    Rng rng(seed ^ 0xc0ffee);
    std::vector<std::complex<double>> c(n);
    for (auto& v : c) {
        const double phase = rng.uniform(0.0, 2.0 * 3.141592653589793);
        const double mag = unit_modulus ? 1.0 : rng.uniform(0.0, 1.0);
        v = std::polar(mag, phase);
    }
    return c;
}

} // namespace rml
