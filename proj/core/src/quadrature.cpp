#include "rml/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "rml/errors.hpp"

namespace rml {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

GaussRule compute_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 1) throw usage_error("gauss_rule: order must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_rule(n)).first;
    return it->second;
}

namespace {

using Cplx = std::complex<double>;

struct PanelEval {
    Cplx value;
    double mag; // integral of |f|, for the roundoff floor
};

inline PanelEval panel_gl15(const std::function<Cplx(double)>& f, double a, double b,
                            const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Cplx sum{0.0, 0.0};
    double mag = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Cplx v = f(mid + half * rule.nodes[i]);
        sum += rule.weights[i] * v;
        mag += rule.weights[i] * std::abs(v);
    }
    return {half * sum, half * mag};
}

} // namespace

QuadratureResult integrate(const std::function<Cplx(double)>& f, double a, double b,
                           const QuadratureOptions& opt) {
    QuadratureResult out;
    if (!(b > a)) return out;
    const GaussRule& rule = gauss_rule(15);
    const double len = b - a;

    // Seed panels: at most ~1.25 wavelengths of the fastest oscillation each.
    std::size_t n0 = 1;
    if (opt.max_frequency > 0.0) {
        const double panel_len = 1.25 * 2.0 * kPi / opt.max_frequency;
        n0 = static_cast<std::size_t>(std::ceil(len / panel_len));
        n0 = std::min<std::size_t>(std::max<std::size_t>(n0, 1), opt.max_panels);
    }

    struct Panel {
        double a, b;
        Cplx coarse;
        int depth;
    };
    std::vector<Panel> stack;
    stack.reserve(n0 + 64);
    double scale = 0.0; // |f|-mass scale for the relative tolerance
    for (std::size_t i = 0; i < n0; ++i) {
        const double pa = a + len * static_cast<double>(i) / static_cast<double>(n0);
        const double pb = a + len * static_cast<double>(i + 1) / static_cast<double>(n0);
        const PanelEval v = panel_gl15(f, pa, pb, rule);
        scale += v.mag;
        stack.push_back({pa, pb, v.value, 0});
    }
    out.panels = n0;

    Cplx total{0.0, 0.0};
    double err = 0.0;
    while (!stack.empty()) {
        const Panel panel = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (panel.a + panel.b);
        const PanelEval left = panel_gl15(f, panel.a, mid, rule);
        const PanelEval right = panel_gl15(f, mid, panel.b, rule);
        out.panels += 2;
        const Cplx fine = left.value + right.value;
        const double diff = std::abs(fine - panel.coarse);
        const double local_budget =
            std::max(opt.abs_tol, opt.rel_tol * std::max(scale, 1e-300)) *
            ((panel.b - panel.a) / len);
        // Below the roundoff of the |f|-mass further splitting only adds noise.
        const double floor = 4e-16 * (left.mag + right.mag);
        if (diff <= std::max(local_budget, floor) || panel.depth >= opt.max_depth ||
            out.panels >= opt.max_panels) {
            if (diff > std::max(local_budget, floor)) out.converged = false;
            total += fine;
            err += diff;
        } else {
            stack.push_back({panel.a, mid, left.value, panel.depth + 1});
            stack.push_back({mid, panel.b, right.value, panel.depth + 1});
        }
    }
    out.value = total;
    out.error = err;
    return out;
}

QuadratureResult integrate_real(const std::function<double(double)>& f, double a,
                                double b, const QuadratureOptions& opt) {
    return integrate([&f](double x) { return Cplx(f(x), 0.0); }, a, b, opt);
}

double gauss_fixed(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

std::complex<double> gauss_fixed_complex(const std::function<Cplx(double)>& f, double a,
                                         double b, int n) {
    const GaussRule& rule = gauss_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

} // namespace rml
