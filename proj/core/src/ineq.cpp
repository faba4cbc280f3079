#include "rml/ineq.hpp"

#include <algorithm>
#include <cmath>

#include <mutex>

#include "rml/errors.hpp"
#include "rml/exponents.hpp"
#include "rml/generators.hpp"
#include "rml/fft.hpp"
#include "rml/norms.hpp"
#include "rml/rng.hpp"
#include "rml/synth_field.hpp"

namespace rml {

namespace {

// Single-shell reference constants: ||F_{0,r}||_p^p / r^{d-1} is r-free up to
// O(1/r) drift, so fixing r = 4 turns the counting sums into O(1) ratios.
double lp_reference(const Bump& bump, double p) {
    static std::map<std::pair<const Bump*, double>, double> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(&bump, p);
    auto it = cache.find(key);
    if (it == cache.end()) {
        double value;
        if (p == 2.0) {
            value = gram_entry_dist(0.0, 4.0, 4.0, bump) / std::pow(4.0, bump.dim() - 1);
        } else {
            auto prof = shell_profile(4.0, bump, ShellVerify::none);
            value = std::pow(lp_norm_radial(prof.profile, p), p) /
                    std::pow(4.0, bump.dim() - 1);
        }
        it = cache.emplace(key, value).first;
    }
    return it->second;
}

} // namespace

double fit_log2_slope(const std::vector<std::pair<double, double>>& xy) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0) || !(y > 0)) continue;
        const double lx = std::log2(x), ly = std::log2(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw usage_error("fit_log2_slope: need at least two positive points");
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw usage_error("fit_log2_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

double sampled_lp_pow(const SampledFunction& f, double p) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
    return acc * f.cell_measure;
}

double sampled_support(const SampledFunction& f) {
    std::size_t n = 0;
    for (const auto& v : f.values)
        if (v != std::complex<double>(0.0, 0.0)) ++n;
    return static_cast<double>(n) * f.cell_measure;
}

InequalityReport check_dyadic_interpolation(
    const std::map<int, SampledFunction>& f_by_level,
    const std::map<int, double>& s_by_level, double p0, double p1, double p,
    bool support_hypothesis) {
    if (f_by_level.empty()) throw usage_error("interpolation: no levels");
    if (!(p > p0) || !(p < p1)) throw usage_error("interpolation: need p in (p0, p1)");
    if (!support_hypothesis && !(p0 > 0))
        throw usage_error("interpolation: p0 must be positive unless the support "
                          "hypothesis is used");

    const std::size_t cells = f_by_level.begin()->second.values.size();
    const double cell = f_by_level.begin()->second.cell_measure;

    // hypothesis constant M
    double M = 0.0;
    for (const auto& [j, fj] : f_by_level) {
        if (fj.values.size() != cells || fj.cell_measure != cell)
            throw usage_error("interpolation: levels live on different grids");
        const double sj = s_by_level.at(j);
        if (sj < 0) throw usage_error("interpolation: negative weight");
        if (sj == 0) {
            if (sampled_lp_pow(fj, p1) > 0)
                throw usage_error("interpolation: zero weight with nonzero level");
            continue;
        }
        {
            const double lhs1 = sampled_lp_pow(fj, p1);
            M = std::max(M, std::pow(lhs1 / (std::pow(2.0, j * p1) * sj), 1.0 / p1));
        }
        if (support_hypothesis) {
            if (sampled_support(fj) > sj * (1 + 1e-12))
                throw usage_error("interpolation: support hypothesis violated");
        } else {
            const double lhs0 = sampled_lp_pow(fj, p0);
            M = std::max(M, std::pow(lhs0 / (std::pow(2.0, j * p0) * sj), 1.0 / p0));
        }
    }
    if (M == 0.0) M = 1.0; // all levels vanish

    SampledFunction sum{std::vector<std::complex<double>>(cells, {0.0, 0.0}), cell};
    for (const auto& [j, fj] : f_by_level)
        for (std::size_t i = 0; i < cells; ++i) sum.values[i] += fj.values[i];

    double rhs_sum = 0.0;
    for (const auto& [j, sj] : s_by_level) rhs_sum += std::pow(2.0, j * p) * sj;

    InequalityReport rep;
    rep.id = support_hypothesis ? "interp-2.2-support" : "interp-2.2";
    rep.instance = "levels=" + std::to_string(f_by_level.size());
    rep.lhs = {sampled_lp_pow(sum, p), 0.0, true};
    rep.rhs = std::pow(M, p) * rhs_sum;
    rep.details["M"] = M;
    rep.details["sigma"] = std::min(p1 - p, p - p0);
    return rep;
}

InequalityReport check_model_lemma(const ModelInstance& instance, double p) {
    const double beta = instance.beta;
    const int m = instance.count;
    if (!(beta > 0.0) || !(beta < 1.0))
        throw usage_error("model: beta must lie in (0, d_g) with d_g = 1");
    const double p_max = 2.0 / (2.0 - beta);
    if (!(p > 0.0) || !(p < p_max))
        throw usage_error("model: p must lie below 2 d_g/(2 d_g - beta)");
    if (m < 1) throw usage_error("model: empty family");

    // Orthonormal-slot realization. Clustered: all f_z live in one unit cube
    // split into K slots; alpha is the circular spectral square root of the
    // target kernel, so the Gram is exactly its circular autocorrelation.
    const int K = std::max(4 * m, instance.slots_per_index * m);
    std::vector<double> alpha(K, 0.0);
    std::vector<double> gram_dist(K, 0.0); // realized kernel by index distance
    if (instance.clustered) {
        std::vector<std::complex<double>> kernel(K);
        for (int i = 0; i < K; ++i) {
            const int dist = std::min(i, K - i);
            kernel[i] = std::pow(1.0 + dist, -beta);
        }
        fft(kernel, {K});
        for (auto& v : kernel) {
            const double re = std::max(v.real(), 0.0); // clamp tiny negatives
            v = std::sqrt(re / K);
        }
        fft(kernel, {K}, true);
        for (int i = 0; i < K; ++i) alpha[i] = kernel[i].real();
        for (int lag = 0; lag < K; ++lag) {
            double acc = 0.0;
            for (int i = 0; i < K; ++i) acc += alpha[i] * alpha[(i + lag) % K];
            gram_dist[lag] = acc;
        }
        // rescale so the hypothesis holds with constant exactly 1
        double worst = 0.0;
        for (int lag = 0; lag < m; ++lag)
            worst = std::max(worst, std::abs(gram_dist[lag]) * std::pow(1.0 + lag, beta));
        if (worst > 0) {
            const double scale = 1.0 / std::sqrt(worst);
            for (auto& a : alpha) a *= scale;
            for (auto& g : gram_dist) g *= scale * scale;
        }
    } else {
        alpha[0] = 1.0;
        gram_dist[0] = 1.0;
    }

    // field evaluation on the slot grid; slot indicators are orthonormal
    // (width 1/K, height sqrt(K)); spread variant separates supports.
    const double slot_width = 1.0 / K;
    Rng rng(instance.seed);
    double worst_ratio = 0.0;
    for (int draw = 0; draw < instance.draws; ++draw) {
        std::vector<std::complex<double>> a(m);
        for (auto& v : a)
            v = std::polar(draw == 0 ? 1.0 : rng.uniform(0.1, 1.0),
                           rng.uniform(0.0, 6.283185307179586));
        double lhs_p = 0.0;
        if (instance.clustered) {
            std::vector<std::complex<double>> slot_coef(K, {0.0, 0.0});
            for (int z = 0; z < m; ++z)
                for (int n = 0; n < K; ++n)
                    slot_coef[n] += a[z] * alpha[((n - z) % K + K) % K];
            for (int n = 0; n < K; ++n)
                lhs_p += std::pow(std::abs(slot_coef[n]) * std::sqrt(double(K)), p) *
                         slot_width;
        } else {
            for (int z = 0; z < m; ++z)
                lhs_p += std::pow(std::abs(a[z]) * std::sqrt(double(K)), p) * slot_width;
        }
        double rhs_p = 0.0;
        for (const auto& v : a) rhs_p += std::pow(std::abs(v), p);
        worst_ratio = std::max(worst_ratio, std::pow(lhs_p / rhs_p, 1.0 / p));
    }

    InequalityReport rep;
    rep.id = "model-2.1";
    rep.instance = (instance.clustered ? "clustered" : "spread");
    rep.instance += " m=" + std::to_string(m) + " beta=" + std::to_string(beta);
    rep.lhs = {worst_ratio, 0.0, true};
    rep.rhs = 1.0;
    rep.details["beta"] = beta;
    rep.details["p_max"] = p_max;
    return rep;
}

InequalityReport check_main_inequality(const PointFamily& family,
                                       const std::vector<std::complex<double>>& coeffs,
                                       double p, std::size_t n_samples,
                                       std::uint64_t seed,
                                       std::shared_ptr<const Bump> bump) {
    for (const auto& c : coeffs)
        if (std::abs(c) > 1.0 + 1e-12)
            throw usage_error("main inequality: coefficients must have modulus <= 1");
    const int d = family.dim();
    double counting = 0.0;
    for (const auto& [k, members] : family.shells())
        counting += std::pow(2.0, k * (d - 1)) * static_cast<double>(members.size());
    const double rhs = lp_reference(*bump, p) * counting;

    SynthField field(PointFamily(family), std::vector<std::complex<double>>(coeffs),
                     std::move(bump));
    const auto est = field.lp(p, n_samples, seed);

    InequalityReport rep;
    rep.id = "main-3.1";
    rep.instance = "n=" + std::to_string(family.size());
    rep.lhs = {std::pow(est.value, p),
               p * std::pow(est.value, p - 1.0) * est.std_error, false};
    rep.rhs = rhs;
    rep.in_range = p < p_crit_value(d);
    rep.details["counting_sum"] = counting;
    rep.details["p"] = p;
    rep.details["norm"] = est.value;
    rep.details["norm_se"] = est.std_error;
    return rep;
}

StratumReport check_l2_density(const PointFamily& family,
                               const DensityStratification& strat, int nu, double p,
                               std::size_t n_samples, std::uint64_t seed,
                               std::shared_ptr<const Bump> bump) {
    const int d = family.dim();
    // members of E_k(u) across shells for this nu
    std::vector<std::size_t> members;
    double count_sum = 0.0;
    for (const auto& st : strat.strata) {
        if (st.nu != nu) continue;
        members.insert(members.end(), st.members.begin(), st.members.end());
        count_sum += std::pow(2.0, st.k * (d - 1)) *
                     static_cast<double>(st.members.size());
    }
    if (members.empty()) throw usage_error("l2 density: empty stratum");

    std::vector<double> flat;
    for (std::size_t q : members) {
        auto y = family.center(q);
        flat.insert(flat.end(), y.begin(), y.end());
        flat.push_back(family.radius(q));
    }
    PointFamily sub(d, std::move(flat));
    std::vector<std::complex<double>> coeffs = gen_coeffs(sub.size(), true, seed);
    SynthField field(std::move(sub), std::move(coeffs), bump);

    const double u_eff = kDensitySlack * std::pow(2.0, nu);
    const double l2 = field.l2();

    StratumReport out;
    out.l2.id = "l2-3.5";
    out.l2.instance = "nu=" + std::to_string(nu) + " n=" + std::to_string(members.size());
    out.l2.lhs = {l2 * l2, 0.0, true};
    out.l2.rhs = lp_reference(*bump, 2.0) * std::pow(u_eff, 2.0 / (d - 1)) *
                 std::log(2.0 + u_eff) * count_sum;
    out.l2.details["u"] = std::pow(2.0, nu);
    out.l2.details["u_eff"] = u_eff;
    out.l2.details["count_sum"] = count_sum;
    // section-4 interval diagnostic (optimal split length exponent), not a
    // certified bound
    const double a = 2.0 / (d - 1);
    out.l2.details["diagnostic_interval_sum"] =
        std::pow(u_eff, 1.0 - a * (d - 3) / 2.0) * count_sum;

    const auto est = field.lp(p, n_samples, seed + 1);
    out.lp.id = "lp-3.8";
    out.lp.instance = out.l2.instance;
    out.lp.lhs = {est.value, est.std_error, false};
    double full_sum = 0.0;
    for (const auto& [k, shell] : family.shells())
        full_sum += std::pow(2.0, k * (d - 1)) * static_cast<double>(shell.size());
    out.lp.rhs = std::pow(lp_reference(*bump, p) * full_sum, 1.0 / p) *
                 std::pow(u_eff, -(1.0 / p - 1.0 / p_crit_value(d))) *
                 std::sqrt(std::log(2.0 + u_eff));
    out.lp.in_range = p < p_crit_value(d);
    return out;
}

InequalityReport check_large_radii(const PointFamily& family,
                                   const std::vector<std::complex<double>>& coeffs,
                                   int ell, double p, double eps,
                                   std::size_t n_samples, std::uint64_t seed,
                                   std::shared_ptr<const Bump> bump) {
    const int d = family.dim();
    if (ell < 0) throw usage_error("large radii: ell must be >= 0");
    const double rmin = std::pow(2.0, ell);
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family.radius(i) < rmin)
            throw usage_error("large radii: radius below 2^ell");
    if (!(eps >= 0) || eps >= (d - 1) * (1.0 / p - 1.0 / p_crit_value(d)))
        throw usage_error("large radii: eps out of range");

    // sup |gamma|^p per (cell of side 2^ell, radius)
    const double cell = std::pow(2.0, ell);
    std::map<std::pair<std::vector<long>, double>, double> sup;
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto y = family.center(i);
        std::vector<long> w(d);
        for (int c = 0; c < d; ++c) w[c] = static_cast<long>(std::floor(y[c] / cell));
        auto key = std::make_pair(std::move(w), family.radius(i));
        auto [it, inserted] = sup.emplace(std::move(key), 0.0);
        it->second = std::max(it->second, std::abs(coeffs[i]));
    }
    double sum = 0.0;
    for (const auto& [key, g] : sup)
        sum += std::pow(g, p) * std::pow(key.second, d - 1);

    const double ref = lp_reference(*bump, p);
    SynthField field(PointFamily(family), std::vector<std::complex<double>>(coeffs),
                     std::move(bump));
    const auto est = field.lp(p, n_samples, seed);

    InequalityReport rep;
    rep.id = "large-radii-6.2";
    rep.instance = "ell=" + std::to_string(ell) + " n=" + std::to_string(family.size());
    rep.lhs = {est.value, est.std_error, false};
    const double base = std::pow(2.0, ell * d / p) * std::pow(ref * sum, 1.0 / p);
    rep.rhs = std::pow(2.0, -eps * ell) * base;
    rep.details["normalized_ratio"] = base > 0 ? est.value / base : 0.0;
    rep.details["eps"] = eps;
    rep.in_range = p < p_crit_value(d);
    return rep;
}

} // namespace rml
