#include "rml/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rml/errors.hpp"

namespace rml {

namespace {

double derive_tail_amplitude(const std::vector<double>& grid,
                             const std::vector<std::complex<double>>& values,
                             double exponent) {
    const double rho_end = grid.back();
    std::vector<double> ratios;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] >= 0.5 * rho_end && grid[i] > 0)
            ratios.push_back(std::abs(values[i]) / std::pow(grid[i], exponent));
    }
    if (ratios.empty()) return 0.0;
    std::sort(ratios.begin(), ratios.end());
    return ratios[ratios.size() / 2];
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RadialProfile::RadialProfile(int dim, std::vector<double> grid,
                             std::vector<std::complex<double>> values,
                             std::optional<double> tail_exponent)
    : dim_(dim), grid_(std::move(grid)), values_(std::move(values)) {
    if (dim_ < 2) throw domain_error("RadialProfile: dimension must be >= 2");
    if (grid_.empty()) throw domain_error("RadialProfile: empty grid");
    if (grid_.size() != values_.size())
        throw domain_error("RadialProfile: grid/value length mismatch");
    if (grid_.front() < 0) throw domain_error("RadialProfile: negative radius");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw domain_error("RadialProfile: grid must be strictly increasing");
    for (double g : grid_)
        if (!std::isfinite(g)) throw domain_error("RadialProfile: non-finite radius");
    if (tail_exponent) {
        TailModel tail;
        tail.exponent = *tail_exponent;
        tail.amplitude = derive_tail_amplitude(grid_, values_, tail.exponent);
        const double end_mag = std::abs(values_.back());
        const double predicted = tail.amplitude * std::pow(grid_.back(), tail.exponent);
        if (tail.amplitude == 0.0) {
            if (end_mag != 0.0)
                throw domain_error("RadialProfile: tail amplitude fit degenerate");
        } else if (end_mag > 4.0 * predicted) {
            throw domain_error(
                "RadialProfile: last sample inconsistent with declared tail decay "
                "(off by more than a factor of 4)");
        }
        tail_ = tail;
    }
    build_spline();
}

void RadialProfile::build_spline() {
    const std::size_t n = grid_.size();
    second_derivs_.assign(n, {0.0, 0.0});
    if (n < 4) return; // linear / single-arc fallback keeps small profiles simple
    // Cubic spline with not-a-knot ends (third derivative continuous across
    // the first and last interior node), which keeps O(h^4) accuracy at the
    // boundary. Unknowns M_1..M_{n-2}; M_0 and M_{n-1} are recovered from the
    // end conditions. Tridiagonal Thomas sweep with complex right-hand side.
    const std::size_t m = n - 2;
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0);
    std::vector<std::complex<double>> rhs(m);
    auto h = [&](std::size_t i) { return grid_[i + 1] - grid_[i]; };
    auto slope = [&](std::size_t i) { return (values_[i + 1] - values_[i]) / h(i); };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t r = i - 1;
        lower[r] = h(i - 1) / 6.0;
        diag[r] = (h(i - 1) + h(i)) / 3.0;
        upper[r] = h(i) / 6.0;
        rhs[r] = slope(i) - slope(i - 1);
    }
    { // fold M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2 into the first row
        const double q = h(0) / h(1);
        diag[0] += lower[0] * (1.0 + q);
        upper[0] -= lower[0] * q;
        lower[0] = 0.0;
    }
    { // fold M_{n-1} = (1 + h_{n-2}/h_{n-3}) M_{n-2} - (h_{n-2}/h_{n-3}) M_{n-3}
        const double q = h(n - 2) / h(n - 3);
        diag[m - 1] += upper[m - 1] * (1.0 + q);
        lower[m - 1] -= upper[m - 1] * q;
        upper[m - 1] = 0.0;
    }
    for (std::size_t i = 1; i < m; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<std::complex<double>> sol(m);
    sol[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
    for (std::size_t i = 0; i < m; ++i) second_derivs_[i + 1] = sol[i];
    second_derivs_[0] =
        sol[0] + (h(0) / h(1)) * (sol[0] - sol[1]);
    second_derivs_[n - 1] =
        sol[m - 1] + (h(n - 2) / h(n - 3)) * (sol[m - 1] - sol[m - 2]);
}

std::complex<double> RadialProfile::operator()(double rho) const {
    if (rho < grid_.front() || rho > grid_.back()) return {0.0, 0.0};
    if (grid_.size() == 1) return values_[0];
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), rho);
    std::size_t hi = std::min<std::size_t>(it - grid_.begin(), grid_.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double h = grid_[hi] - grid_[lo];
    const double a = (grid_[hi] - rho) / h;
    const double b = (rho - grid_[lo]) / h;
    return a * values_[lo] + b * values_[hi] +
           ((a * a * a - a) * second_derivs_[lo] + (b * b * b - b) * second_derivs_[hi]) *
               (h * h / 6.0);
}

double RadialProfile::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

RadialProfile RadialProfile::map(
    const std::function<std::complex<double>(double, std::complex<double>)>& fn,
    std::optional<double> tail_exponent) const {
    std::vector<std::complex<double>> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = fn(grid_[i], values_[i]);
    return RadialProfile(dim_, grid_, std::move(out), tail_exponent);
}

void RadialProfile::save_csv(std::ostream& os) const {
    os << "# dim=" << dim_ << " tail=";
    if (tail_) os << format17(tail_->exponent);
    else os << "none";
    os << "\n";
    bool complex_vals = false;
    for (const auto& v : values_)
        if (v.imag() != 0.0) complex_vals = true;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        os << format17(grid_[i]) << "," << format17(values_[i].real());
        if (complex_vals) os << "," << format17(values_[i].imag());
        os << "\n";
    }
}

void RadialProfile::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw usage_error("RadialProfile: cannot open " + path);
    save_csv(os);
}

RadialProfile RadialProfile::load_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw usage_error("RadialProfile: empty input");
    int dim = 0;
    std::optional<double> tail_exponent;
    {
        std::istringstream hs(line);
        std::string tok;
        hs >> tok; // '#'
        if (tok != "#") throw usage_error("RadialProfile: missing header line");
        while (hs >> tok) {
            if (tok.rfind("dim=", 0) == 0) dim = std::stoi(tok.substr(4));
            else if (tok.rfind("tail=", 0) == 0) {
                const std::string t = tok.substr(5);
                if (t != "none") tail_exponent = std::stod(t);
            }
        }
    }
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell;
        double cols[3] = {0, 0, 0};
        int ncol = 0;
        while (std::getline(ls, cell, ',') && ncol < 3) cols[ncol++] = std::stod(cell);
        if (ncol < 2) throw usage_error("RadialProfile: malformed CSV row: " + line);
        grid.push_back(cols[0]);
        values.emplace_back(cols[1], ncol == 3 ? cols[2] : 0.0);
    }
    return RadialProfile(dim, std::move(grid), std::move(values), tail_exponent);
}

RadialProfile RadialProfile::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw usage_error("RadialProfile: cannot open " + path);
    return load_csv(is);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2) throw usage_error("linspace: need at least two points");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

std::vector<double> geomspace(double a, double b, std::size_t n) {
    if (n < 2) throw usage_error("geomspace: need at least two points");
    if (!(a > 0) || !(b > a)) throw usage_error("geomspace: need 0 < a < b");
    std::vector<double> g(n);
    const double ratio = std::log(b / a);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

RadialProfile sample_profile(int dim, const std::vector<double>& grid,
                             const std::function<std::complex<double>(double)>& fn,
                             std::optional<double> tail_exponent) {
    std::vector<std::complex<double>> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = fn(grid[i]);
    return RadialProfile(dim, grid, std::move(values), tail_exponent);
}

} // namespace rml
