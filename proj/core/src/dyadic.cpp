#include "rml/dyadic.hpp"

#include <algorithm>
#include <cmath>

#include "rml/errors.hpp"
#include "rml/parallel.hpp"

namespace rml {

namespace {

// Periodic rectangle sums over a row-major (nx x ny) array via one tile of
// prefix sums; wrapped ranges split into at most 2x2 tile rectangles.
class PeriodicSums {
public:
    PeriodicSums(const std::vector<double>& a, int nx, int ny) : nx_(nx), ny_(ny) {
        pre_.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                pre_[idx(i + 1, j + 1)] = a[static_cast<std::size_t>(i) * ny + j] +
                                          pre_[idx(i, j + 1)] + pre_[idx(i + 1, j)] -
                                          pre_[idx(i, j)];
            }
        }
    }

    // sum over cells [x0, x0+lx) x [y0, y0+ly), 0 < lx <= nx, 0 < ly <= ny,
    // x0/y0 arbitrary integers (wrapped)
    double sum(long x0, int lx, long y0, int ly) const {
        x0 = wrap(x0, nx_);
        y0 = wrap(y0, ny_);
        double total = 0.0;
        const int x1 = static_cast<int>(std::min<long>(x0 + lx, nx_));
        const int xa_len = x1 - static_cast<int>(x0);
        const int xb_len = lx - xa_len;
        const int y1 = static_cast<int>(std::min<long>(y0 + ly, ny_));
        const int ya_len = y1 - static_cast<int>(y0);
        const int yb_len = ly - ya_len;
        total += rect(static_cast<int>(x0), xa_len, static_cast<int>(y0), ya_len);
        if (xb_len > 0) total += rect(0, xb_len, static_cast<int>(y0), ya_len);
        if (yb_len > 0) total += rect(static_cast<int>(x0), xa_len, 0, yb_len);
        if (xb_len > 0 && yb_len > 0) total += rect(0, xb_len, 0, yb_len);
        return total;
    }

private:
    static long wrap(long v, int n) {
        v %= n;
        return v < 0 ? v + n : v;
    }
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * (ny_ + 1) + j;
    }
    double rect(int x, int lx, int y, int ly) const {
        if (lx <= 0 || ly <= 0) return 0.0;
        return pre_[idx(x + lx, y + ly)] - pre_[idx(x, y + ly)] - pre_[idx(x + lx, y)] +
               pre_[idx(x, y)];
    }
    int nx_, ny_;
    std::vector<double> pre_;
};

struct Shape {
    int nx, ny, dim;
};

Shape grid_shape(int dim, int log2_n) {
    const int n = 1 << log2_n;
    if (dim == 1) return {n, 1, 1};
    if (dim == 2) return {n, n, 2};
    throw domain_error("grid: dim must be 1 or 2");
}

} // namespace

std::vector<double> hl_maximal(const std::vector<double>& g, int dim, int log2_n) {
    const Shape sh = grid_shape(dim, log2_n);
    if (g.size() != static_cast<std::size_t>(sh.nx) * sh.ny)
        throw usage_error("hl_maximal: size does not match the grid");
    std::vector<double> absg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) absg[i] = std::abs(g[i]);
    PeriodicSums sums(absg, sh.nx, sh.ny);

    std::vector<double> out(g.size(), 0.0);
    const int tmax = sh.nx / 2;
    parallel_for(static_cast<std::size_t>(sh.nx), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j < sh.ny; ++j) {
            double best = 0.0;
            for (int t = 0; t <= tmax; ++t) {
                const int lx = std::min(2 * t + 1, sh.nx);
                const int ly = dim == 2 ? std::min(2 * t + 1, sh.ny) : 1;
                const double s = sums.sum(i - t, lx, dim == 2 ? j - t : 0, ly);
                best = std::max(best, s / (static_cast<double>(lx) * ly));
                if (lx == sh.nx && (dim == 1 || ly == sh.ny)) break;
            }
            out[static_cast<std::size_t>(i) * sh.ny + j] = best;
        }
    });
    return out;
}

WhitneyDecomposition::WhitneyDecomposition(const std::vector<std::uint8_t>& mask,
                                           int dim, int log2_n)
    : dim_(dim), log2_n_(log2_n), n_(1 << log2_n) {
    const Shape sh = grid_shape(dim, log2_n);
    if (mask.size() != static_cast<std::size_t>(sh.nx) * sh.ny)
        throw usage_error("whitney: mask size does not match the grid");
    std::vector<double> m01(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) m01[i] = mask[i] ? 1.0 : 0.0;
    PeriodicSums sums(m01, sh.nx, sh.ny);

    // Dilate cell range along one axis for a cube of side S at corner z:
    // the real interval [(z + 1/2) S - 10 S, (z + 1/2) S + 10 S) meets the
    // cells floor(lo) .. ceil(hi) - 1.
    auto dilate_range = [](int z, int s_cells, long& lo, int& len) {
        const double c = (static_cast<double>(z) + 0.5) * s_cells;
        const double real_lo = c - 10.0 * s_cells;
        const double real_hi = c + 10.0 * s_cells;
        lo = static_cast<long>(std::floor(real_lo));
        len = static_cast<int>(std::ceil(real_hi)) - static_cast<int>(lo);
    };

    admissible_.resize(log2_n_ + 1);
    for (int m = 0; m <= log2_n_; ++m) {
        const int s_cells = 1 << m;
        const int cx_count = sh.nx / s_cells;
        const int cy_count = dim == 2 ? sh.ny / s_cells : 1;
        admissible_[m].assign(static_cast<std::size_t>(cx_count) * cy_count, 0);
        for (int zx = 0; zx < cx_count; ++zx) {
            long lox;
            int lenx;
            dilate_range(zx, s_cells, lox, lenx);
            const int clenx = std::min(lenx, sh.nx);
            for (int zy = 0; zy < cy_count; ++zy) {
                double want, got;
                if (dim == 2) {
                    long loy;
                    int leny;
                    dilate_range(zy, s_cells, loy, leny);
                    const int cleny = std::min(leny, sh.ny);
                    want = static_cast<double>(clenx) * cleny;
                    got = sums.sum(lox, clenx, loy, cleny);
                } else {
                    want = clenx;
                    got = sums.sum(lox, clenx, 0, 1);
                }
                admissible_[m][static_cast<std::size_t>(zx) * cy_count + zy] =
                    (got >= want - 0.5) ? 1 : 0;
            }
        }
    }

    // maximal admissible cubes
    for (int m = log2_n_; m >= 0; --m) {
        const int s_cells = 1 << m;
        const int cx_count = sh.nx / s_cells;
        const int cy_count = dim == 2 ? sh.ny / s_cells : 1;
        for (int zx = 0; zx < cx_count; ++zx) {
            for (int zy = 0; zy < cy_count; ++zy) {
                if (!admissible_[m][static_cast<std::size_t>(zx) * cy_count + zy])
                    continue;
                bool parent_ok = false;
                if (m < log2_n_) {
                    const int py_count = dim == 2 ? (sh.ny >> (m + 1)) : 1;
                    parent_ok = admissible_[m + 1][static_cast<std::size_t>(zx / 2) *
                                                       py_count +
                                                   (dim == 2 ? zy / 2 : 0)] != 0;
                }
                if (!parent_ok) cubes_.push_back({m, zx, dim == 2 ? zy : 0});
            }
        }
    }

    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] && !admissible_[0][i]) uncovered_.push_back(i);
    }
}

bool WhitneyDecomposition::admissible(const DyadicCube& q) const {
    if (q.level < 0 || q.level > log2_n_) return false;
    const int cy_count = dim_ == 2 ? (n_ >> q.level) : 1;
    return admissible_[q.level][static_cast<std::size_t>(q.cx) * cy_count + q.cy] != 0;
}

DyadicCube WhitneyDecomposition::containing_cube(DyadicCube q) const {
    if (!admissible(q))
        throw internal_error("whitney: cube is not inside the decomposition");
    while (q.level < log2_n_) {
        DyadicCube parent{q.level + 1, q.cx / 2, dim_ == 2 ? q.cy / 2 : 0};
        if (!admissible(parent)) break;
        q = parent;
    }
    return q;
}

std::vector<DyadicCube> whitney(const std::vector<std::uint8_t>& mask, int dim,
                                int log2_n) {
    return WhitneyDecomposition(mask, dim, log2_n).cubes();
}

std::vector<double> peetre_S(const GridField& f) {
    const Shape sh = grid_shape(f.dim(), f.log2_n());
    const int n = f.n();
    std::vector<double> acc(f.cells(), 0.0);
    for (const auto& [s, band] : f.bands()) {
        if (band.size() != f.cells()) throw usage_error("peetre_S: band size mismatch");
        // window radius in cells: 10 * dim * 2^{-s} * n
        const double radius =
            10.0 * f.dim() * std::pow(2.0, -s) * static_cast<double>(n);
        const long r = static_cast<long>(std::floor(radius));
        std::vector<double> mag(band.size());
        for (std::size_t i = 0; i < band.size(); ++i) mag[i] = std::abs(band[i]);

        if (f.dim() == 1) {
            parallel_for(static_cast<std::size_t>(sh.nx), [&](std::size_t i) {
                double best = 0.0;
                const long lo = static_cast<long>(i) - std::min<long>(r, n - 1);
                const long hi = static_cast<long>(i) + std::min<long>(r, n - 1);
                for (long x = lo; x <= hi; ++x) {
                    const int xi = static_cast<int>(((x % n) + n) % n);
                    best = std::max(best, mag[xi]);
                }
                acc[i] += best * best;
            });
        } else {
            // per-row sparse tables for O(1) range maxima along chords
            const int logn = f.log2_n();
            std::vector<std::vector<double>> table(logn + 1,
                                                   std::vector<double>(f.cells()));
            table[0] = mag;
            for (int k = 1; k <= logn; ++k) {
                const int half = 1 << (k - 1);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        const int j2 = (j + half) & (n - 1);
                        table[k][static_cast<std::size_t>(i) * n + j] =
                            std::max(table[k - 1][static_cast<std::size_t>(i) * n + j],
                                     table[k - 1][static_cast<std::size_t>(i) * n + j2]);
                    }
                }
            }
            auto row_max = [&](int i, long j0, int len) {
                // max over wrapped range [j0, j0+len), len <= n
                if (len >= n) len = n;
                const int k = len > 1 ? 63 - __builtin_clzll(static_cast<unsigned long long>(len)) : 0;
                const int jl = static_cast<int>(((j0 % n) + n) % n);
                const int jr = static_cast<int>((((j0 + len - (1LL << k)) % n) + n) % n);
                return std::max(table[k][static_cast<std::size_t>(i) * n + jl],
                                table[k][static_cast<std::size_t>(i) * n + jr]);
            };
            const long rmax = std::min<long>(r, n - 1);
            parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
                const int i = static_cast<int>(ii);
                for (int j = 0; j < n; ++j) {
                    double best = 0.0;
                    for (long dy = -rmax; dy <= rmax; ++dy) {
                        const double chord2 =
                            radius * radius - static_cast<double>(dy) * dy;
                        if (chord2 < 0) continue;
                        const long dx = std::min<long>(
                            static_cast<long>(std::floor(std::sqrt(chord2))), n - 1);
                        const int row = static_cast<int>((((i + dy) % n) + n) % n);
                        best = std::max(best,
                                        row_max(row, j - dx, static_cast<int>(2 * dx + 1)));
                    }
                    acc[static_cast<std::size_t>(i) * n + j] += best * best;
                }
            });
        }
    }
    for (auto& v : acc) v = std::sqrt(v);
    return acc;
}

double atom_sup(const GridField& f, const std::vector<DyadicCube>& cubes, int s) {
    const auto it = f.bands().find(s);
    if (it == f.bands().end()) throw usage_error("atom_sup: missing band");
    const int n = f.n();
    double sup = 0.0;
    for (const auto& q : cubes) {
        const int side = 1 << q.level;
        for (int dx = 0; dx < side; ++dx) {
            const int x = q.cx * side + dx;
            if (f.dim() == 1) {
                sup = std::max(sup, std::abs(it->second[x]));
            } else {
                for (int dy = 0; dy < side; ++dy) {
                    const int y = q.cy * side + dy;
                    sup = std::max(sup,
                                   std::abs(it->second[static_cast<std::size_t>(x) * n + y]));
                }
            }
        }
    }
    return sup;
}

double atom_l2_sq(const GridField& f, const std::vector<DyadicCube>& cubes, int s) {
    const auto it = f.bands().find(s);
    if (it == f.bands().end()) throw usage_error("atom_l2_sq: missing band");
    const int n = f.n();
    double sum = 0.0;
    for (const auto& q : cubes) {
        const int side = 1 << q.level;
        for (int dx = 0; dx < side; ++dx) {
            const int x = q.cx * side + dx;
            if (f.dim() == 1) {
                sum += std::norm(it->second[x]);
            } else {
                for (int dy = 0; dy < side; ++dy) {
                    const int y = q.cy * side + dy;
                    sum += std::norm(it->second[static_cast<std::size_t>(x) * n + y]);
                }
            }
        }
    }
    return sum * f.cell_volume();
}

AtomBuild build_atoms(const GridField& f, int j_min, int j_max) {
    const Shape sh = grid_shape(f.dim(), f.log2_n());
    const int n = f.n();
    for (const auto& [s, band] : f.bands()) {
        if (s >= 1 && std::pow(2.0, -s) < 1.0 / n)
            throw usage_error("build_atoms: band below grid resolution");
        (void)band;
    }

    AtomBuild out;
    out.sf = peetre_S(f);

    if (j_min > j_max) {
        double lo = 0.0, hi = 0.0;
        for (double v : out.sf) {
            if (v > 0.0 && (lo == 0.0 || v < lo)) lo = v;
            hi = std::max(hi, v);
        }
        if (hi == 0.0) return out; // zero field: no level sets, no atoms
        j_min = static_cast<int>(std::floor(std::log2(lo))) - 1;
        j_max = static_cast<int>(std::ceil(std::log2(hi)));
    }
    out.j_min = j_min;
    out.j_max = j_max;

    // Omega_j masks for j_min .. j_max+1 (the j+1 mask feeds the Q test)
    auto mask_of = [&](int j) {
        const double thr = std::pow(2.0, j);
        std::vector<std::uint8_t> m(out.sf.size());
        for (std::size_t i = 0; i < out.sf.size(); ++i) m[i] = out.sf[i] > thr ? 1 : 0;
        return m;
    };

    const double cell_vol = f.cell_volume();
    std::vector<std::uint8_t> mask_next = mask_of(j_max + 1);
    for (int j = j_max; j >= j_min; --j) {
        std::vector<std::uint8_t> mask = mask_of(j);
        AtomSet level;
        level.j = j;
        std::size_t count = 0;
        for (auto v : mask) count += v;
        level.omega_measure = static_cast<double>(count) * cell_vol;
        if (count == 0) {
            mask_next = std::move(mask);
            continue;
        }

        // Omega_j* via the maximal function of the indicator
        std::vector<double> chi(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) chi[i] = mask[i];
        auto mfn = hl_maximal(chi, f.dim(), f.log2_n());
        const double thr_star = std::pow(100.0, -f.dim());
        std::vector<std::uint8_t> star(mask.size());
        std::size_t star_count = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            star[i] = mfn[i] > thr_star ? 1 : 0;
            star_count += star[i];
        }
        level.omega_star_measure = static_cast<double>(star_count) * cell_vol;

        WhitneyDecomposition wd(star, f.dim(), f.log2_n());
        level.whitney_cubes = wd.cubes();
        std::map<DyadicCube, std::size_t> windex;
        for (std::size_t wi = 0; wi < level.whitney_cubes.size(); ++wi)
            windex[level.whitney_cubes[wi]] = wi;

        PeriodicSums sums_j(chi, sh.nx, sh.ny);
        std::vector<double> chi_next(mask_next.size());
        for (std::size_t i = 0; i < mask_next.size(); ++i) chi_next[i] = mask_next[i];
        PeriodicSums sums_next(chi_next, sh.nx, sh.ny);

        for (const auto& [s, band] : f.bands()) {
            const int m = f.log2_n() - std::max(s, 0);
            if (m < 0 || m > f.log2_n()) continue;
            if (s < 1) continue; // the low band has cube level log2_n (whole grid)
            const int side = 1 << m;
            const int cx_count = sh.nx / side;
            const int cy_count = f.dim() == 2 ? sh.ny / side : 1;
            const double cube_cells =
                static_cast<double>(side) * (f.dim() == 2 ? side : 1);
            for (int zx = 0; zx < cx_count; ++zx) {
                for (int zy = 0; zy < cy_count; ++zy) {
                    const double in_j =
                        sums_j.sum(static_cast<long>(zx) * side, side,
                                   f.dim() == 2 ? static_cast<long>(zy) * side : 0,
                                   f.dim() == 2 ? side : 1);
                    if (2.0 * in_j < cube_cells) continue;
                    const double in_next =
                        sums_next.sum(static_cast<long>(zx) * side, side,
                                      f.dim() == 2 ? static_cast<long>(zy) * side : 0,
                                      f.dim() == 2 ? side : 1);
                    if (2.0 * in_next >= cube_cells) continue;
                    DyadicCube q{m, zx, f.dim() == 2 ? zy : 0};
                    if (!wd.admissible(q))
                        throw internal_error(
                            "build_atoms: Q escaped its Whitney decomposition");
                    const DyadicCube w = wd.containing_cube(q);
                    level.atoms[{s, windex.at(w)}].push_back(q);
                }
            }
        }
        out.levels.push_back(std::move(level));
        mask_next = std::move(mask);
    }
    std::reverse(out.levels.begin(), out.levels.end());
    return out;
}

} // namespace rml
