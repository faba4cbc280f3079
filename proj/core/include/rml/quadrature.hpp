#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace rml {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed once by Newton iteration and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int n);

struct QuadratureOptions {
    double rel_tol = 1e-10;
    /// Absolute tolerance floor; panels whose estimated error is below it are
    /// accepted even when the integral nearly cancels.
    double abs_tol = 0.0;
    /// Largest phase frequency (radians per unit length) present in the
    /// integrand; bounds the initial panel length so no oscillation is
    /// stepped over. 0 means "not oscillatory".
    double max_frequency = 0.0;
    int max_depth = 28;
    std::size_t max_panels = 8'000'000;
};

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    /// Error estimate accumulated from panel halving.
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = true;
};

/// Adaptive panel integration of f over [a, b]. Oscillation-aware seeding
/// (panel length a fixed fraction of the shortest wavelength), then panel
/// halving until the whole-panel and split-panel values agree.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f,
                           double a, double b, const QuadratureOptions& opt = {});

/// Same machinery for real integrands.
QuadratureResult integrate_real(const std::function<double(double)>& f, double a,
                                double b, const QuadratureOptions& opt = {});

/// Plain fixed-order Gauss-Legendre value on [a, b], for integrands known to
/// be smooth and resolved at order n.
double gauss_fixed(const std::function<double(double)>& f, double a, double b, int n);
std::complex<double> gauss_fixed_complex(const std::function<std::complex<double>(double)>& f,
                                         double a, double b, int n);

} // namespace rml
