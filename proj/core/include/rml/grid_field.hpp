#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace rml {

/// Smooth 0-to-1 transition, identically 0 for x <= 0 and 1 for x >= 1,
/// flat to infinite order at both ends.
double smooth_step(double x);

/// Squared Littlewood-Paley bump: eta_o_hat(rho)^2, supported in (1/2, 2)
/// with sum over s of lp_band_sq(2^{-s} rho) = 1 for rho > 0.
double lp_band_sq(double rho);
/// The bump itself (square root; smooth by the flat transitions).
double lp_band(double rho);

/// Multiband function on the periodized grid [0,1)^{dim} with 2^{log2_n}
/// cells per side. Band s holds the samples of f_s whose discrete spectrum
/// lies in the annulus 2^{s-1} < |xi| < 2^{s+1} (s = 0 is the low-pass
/// complement; the top band is treated as the high-pass complement so the
/// bands telescope exactly).
class GridField {
public:
    GridField(int dim, int log2_n);

    int dim() const { return dim_; }
    int log2_n() const { return log2_n_; }
    int n() const { return 1 << log2_n_; }
    std::size_t cells() const { return cells_; }
    double cell_volume() const;

    const std::map<int, std::vector<std::complex<double>>>& bands() const {
        return bands_;
    }
    std::map<int, std::vector<std::complex<double>>>& bands() { return bands_; }

    /// Fraction of a band's spectral energy outside its annulus.
    double band_leakage(int s) const;
    /// Throws domain_error when any band leaks more than tol of its energy.
    void validate_spectra(double tol = 1e-6) const;

    /// Pointwise sum of all bands.
    std::vector<std::complex<double>> reconstruct() const;

    /// Flat little-endian binary array plus a JSON sidecar (path + ".json").
    void save(const std::string& path_base) const;
    static GridField load(const std::string& path_base);

private:
    int dim_;
    int log2_n_;
    std::size_t cells_;
    std::map<int, std::vector<std::complex<double>>> bands_;
};

/// Littlewood-Paley band decomposition of grid samples. Bands run from 0
/// (low-pass) through s_top = log2_n - 1 (high-pass complement); interior
/// bands have annular spectra by construction. An explicit s_top above the
/// resolvable range is a usage error.
GridField band_decompose(const std::vector<std::complex<double>>& samples, int dim,
                         int log2_n, int s_top = -1);

} // namespace rml
