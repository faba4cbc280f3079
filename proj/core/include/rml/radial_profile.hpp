#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rml {

/// Declared algebraic decay beyond the sampled range: |f(rho)| ~ amplitude *
/// rho^exponent for rho past the last grid point. The amplitude is always
/// derived from the samples (median of |v|/rho^e over the last octave), so a
/// profile is fully described by its samples plus the exponent.
struct TailModel {
    double exponent = 0.0;
    double amplitude = 0.0;
};

/// A sampled complex-valued function of radius, tagged with the ambient
/// dimension it lives in. Stands for radial multipliers m(|xi|), radial
/// kernels kappa(|x|), and bump profiles alike.
///
/// Between samples the profile evaluates by natural cubic spline; outside the
/// sampled range it evaluates to zero (compact-support semantics), while
/// integral norms add the declared tail analytically.
class RadialProfile {
public:
    RadialProfile(int dim, std::vector<double> grid,
                  std::vector<std::complex<double>> values,
                  std::optional<double> tail_exponent = std::nullopt);

    int dim() const { return dim_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<std::complex<double>>& values() const { return values_; }
    const std::optional<TailModel>& tail() const { return tail_; }
    std::size_t size() const { return grid_.size(); }

    double rho_min() const { return grid_.front(); }
    double rho_max() const { return grid_.back(); }

    /// Spline evaluation; zero outside [rho_min, rho_max].
    std::complex<double> operator()(double rho) const;

    double max_abs() const;

    /// Pointwise map keeping grid and dimension.
    RadialProfile map(const std::function<std::complex<double>(double, std::complex<double>)>& fn,
                      std::optional<double> tail_exponent = std::nullopt) const;

    /// CSV with a `# dim=<d> tail=<exponent|none>` header; 17 significant
    /// digits, so decimal text round-trips bit-exactly.
    void save_csv(std::ostream& os) const;
    void save_csv(const std::string& path) const;
    static RadialProfile load_csv(std::istream& is);
    static RadialProfile load_csv(const std::string& path);

private:
    void build_spline();

    int dim_;
    std::vector<double> grid_;
    std::vector<std::complex<double>> values_;
    std::optional<TailModel> tail_;
    std::vector<std::complex<double>> second_derivs_;
};

/// Uniform grid helper: n points from a to b inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

/// Geometric grid helper: n points from a to b inclusive, a > 0.
std::vector<double> geomspace(double a, double b, std::size_t n);

/// Samples a scalar function on a grid.
RadialProfile sample_profile(int dim, const std::vector<double>& grid,
                             const std::function<std::complex<double>(double)>& fn,
                             std::optional<double> tail_exponent = std::nullopt);

} // namespace rml
