#include "rml/grid_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rml/errors.hpp"
#include "rml/fft.hpp"

namespace rml {

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double lp_band_sq(double rho) {
    if (rho <= 0.0) return 0.0;
    const double t = std::log2(rho);
    return smooth_step(t + 1.0) - smooth_step(t);
}

double lp_band(double rho) { return std::sqrt(lp_band_sq(rho)); }

namespace {

// Band multipliers m_s(|xi|), telescoping to 1 on the whole grid spectrum:
// m_0 low-pass, m_s annular for 0 < s < s_top, m_{s_top} high-pass.
double band_multiplier(int s, int s_top, double rho) {
    if (s == 0) return rho <= 0.0 ? 1.0 : 1.0 - smooth_step(std::log2(rho));
    if (rho <= 0.0) return 0.0;
    const double t = std::log2(rho);
    if (s == s_top) return smooth_step(t - (s - 1));
    return smooth_step(t - (s - 1)) - smooth_step(t - s);
}

} // namespace

GridField::GridField(int dim, int log2_n) : dim_(dim), log2_n_(log2_n) {
    if (dim_ != 1 && dim_ != 2) throw domain_error("GridField: dim must be 1 or 2");
    if (log2_n_ < 2 || log2_n_ > 16) throw domain_error("GridField: log2_n out of range");
    cells_ = 1;
    for (int a = 0; a < dim_; ++a) cells_ *= static_cast<std::size_t>(n());
}

double GridField::cell_volume() const {
    return 1.0 / static_cast<double>(cells_);
}

double GridField::band_leakage(int s) const {
    const auto it = bands_.find(s);
    if (it == bands_.end()) throw usage_error("GridField: missing band");
    std::vector<std::complex<double>> hat(it->second);
    std::vector<int> shape(dim_, n());
    fft(hat, shape);
    double inside = 0.0, outside = 0.0;
    const double lo = std::pow(2.0, s - 1), hi = std::pow(2.0, s + 1);
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
        const int i = static_cast<int>(idx) / (dim_ == 2 ? n() : 1);
        const int j = dim_ == 2 ? static_cast<int>(idx) % n() : 0;
        const double fx = fft_freq(dim_ == 2 ? i : static_cast<int>(idx), n());
        const double fy = dim_ == 2 ? fft_freq(j, n()) : 0.0;
        const double mag = std::hypot(fx, fy);
        const double e = std::norm(hat[idx]);
        if (mag > lo && mag < hi) inside += e;
        else outside += e;
    }
    const double total = inside + outside;
    return total > 0.0 ? outside / total : 0.0;
}

void GridField::validate_spectra(double tol) const {
    for (const auto& [s, band] : bands_) {
        if (s <= 0) continue; // low band has no annulus constraint
        if (std::pow(2.0, -s) < 1.0 / n())
            throw domain_error("GridField: band below grid resolution");
        if (band_leakage(s) > tol)
            throw domain_error("GridField: band " + std::to_string(s) +
                               " leaks spectrum beyond its annulus");
    }
}

std::vector<std::complex<double>> GridField::reconstruct() const {
    std::vector<std::complex<double>> sum(cells_, {0.0, 0.0});
    for (const auto& [s, band] : bands_) {
        if (band.size() != cells_) throw internal_error("GridField: band size mismatch");
        for (std::size_t i = 0; i < cells_; ++i) sum[i] += band[i];
    }
    return sum;
}

void GridField::save(const std::string& path_base) const {
    nlohmann::json meta;
    meta["dim"] = dim_;
    meta["log2_n"] = log2_n_;
    std::vector<int> levels;
    for (const auto& [s, band] : bands_) levels.push_back(s);
    meta["bands"] = levels;
    std::ofstream js(path_base + ".json");
    if (!js) throw usage_error("GridField: cannot open " + path_base + ".json");
    js << meta.dump(2) << "\n";

    std::ofstream bin(path_base + ".bin", std::ios::binary);
    if (!bin) throw usage_error("GridField: cannot open " + path_base + ".bin");
    for (const auto& [s, band] : bands_)
        bin.write(reinterpret_cast<const char*>(band.data()),
                  static_cast<std::streamsize>(band.size() * sizeof(band[0])));
}

GridField GridField::load(const std::string& path_base) {
    std::ifstream js(path_base + ".json");
    if (!js) throw usage_error("GridField: cannot open " + path_base + ".json");
    nlohmann::json meta = nlohmann::json::parse(js);
    GridField out(meta.at("dim").get<int>(), meta.at("log2_n").get<int>());
    std::ifstream bin(path_base + ".bin", std::ios::binary);
    if (!bin) throw usage_error("GridField: cannot open " + path_base + ".bin");
    for (int s : meta.at("bands").get<std::vector<int>>()) {
        std::vector<std::complex<double>> band(out.cells());
        bin.read(reinterpret_cast<char*>(band.data()),
                 static_cast<std::streamsize>(band.size() * sizeof(band[0])));
        if (!bin) throw usage_error("GridField: truncated binary payload");
        out.bands()[s] = std::move(band);
    }
    return out;
}

GridField band_decompose(const std::vector<std::complex<double>>& samples, int dim,
                         int log2_n, int s_top) {
    GridField out(dim, log2_n);
    if (samples.size() != out.cells())
        throw usage_error("band_decompose: sample count does not match the grid");
    const int n = out.n();
    if (s_top < 0) s_top = log2_n - 1;
    if (s_top > log2_n - 1)
        throw usage_error("band_decompose: requested band range exceeds resolution");
    if (s_top < 1) throw usage_error("band_decompose: need at least two bands");

    std::vector<std::complex<double>> hat(samples);
    std::vector<int> shape(dim, n);
    fft(hat, shape);

    const double inv_cells = 1.0 / static_cast<double>(out.cells());
    for (int s = 0; s <= s_top; ++s) {
        std::vector<std::complex<double>> bhat(out.cells());
        for (std::size_t idx = 0; idx < hat.size(); ++idx) {
            double fx, fy = 0.0;
            if (dim == 2) {
                fx = fft_freq(static_cast<int>(idx) / n, n);
                fy = fft_freq(static_cast<int>(idx) % n, n);
            } else {
                fx = fft_freq(static_cast<int>(idx), n);
            }
            const double mag = std::hypot(fx, fy);
            bhat[idx] = hat[idx] * band_multiplier(s, s_top, mag) * inv_cells;
        }
        fft(bhat, shape, /*inverse=*/true);
        out.bands()[s] = std::move(bhat);
    }
    return out;
}

} // namespace rml
