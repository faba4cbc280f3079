#include "rml/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rml/bessel.hpp"
#include "rml/errors.hpp"
#include "rml/parallel.hpp"
#include "rml/rng.hpp"
#include "rml/synth_field.hpp"

namespace rml {

namespace {

constexpr double kEps = 1e-9;

std::vector<double> point_coords(const PointFamily& family, std::size_t i) {
    std::vector<double> c(family.dim() + 1);
    auto y = family.center(i);
    for (int a = 0; a < family.dim(); ++a) c[a] = y[a];
    c[family.dim()] = family.radius(i);
    return c;
}

double dist_d1(const PointFamily& family, std::size_t i, std::size_t j) {
    return family.pair_distance(i, j);
}

struct WitnessInfo {
    double ratio = 0.0;
    double radius = 0.0;
    std::size_t center = 0;
    std::size_t count = 0;
};

bool better(const WitnessInfo& a, const WitnessInfo& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    if (a.radius != b.radius) return a.radius < b.radius;
    return a.center < b.center;
}

// For one candidate center p, fold its candidate balls into the per-member
// best-witness table. dist[] are the distances from p to every shell member,
// order[] the member indices sorted by that distance.
void scan_center(const std::vector<double>& dist, const std::vector<std::size_t>& order,
                 std::size_t p, double cap, std::vector<WitnessInfo>& best) {
    const std::size_t m = order.size();
    // count(i): members within dist[i] + eps (ties collapse forward)
    std::vector<std::size_t> count(m);
    {
        std::size_t hi = 0;
        for (std::size_t i = 0; i < m; ++i) {
            while (hi < m && dist[order[hi]] <= dist[order[i]] + kEps) ++hi;
            count[i] = hi;
        }
    }
    // suffix argmax of count(j)/(dist_j + eps) over admissible radii
    std::vector<std::size_t> arg(m, m);
    {
        std::size_t best_j = m;
        double best_ratio = -1.0;
        for (std::size_t j = m; j-- > 0;) {
            const double dj = dist[order[j]];
            if (dj > 0.0 && dj <= cap) {
                const double ratio = static_cast<double>(count[j]) / (dj + kEps);
                // >= so ties resolve to the smaller radius (later j in
                // this downward sweep)
                if (ratio >= best_ratio) {
                    best_ratio = ratio;
                    best_j = j;
                }
            }
            arg[j] = best_j;
        }
    }
    // radius-1 singleton ball
    std::size_t count1 = 0;
    while (count1 < m && dist[order[count1]] <= 1.0) ++count1;

    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t q = order[i];
        WitnessInfo cand;
        if (arg[i] != m) {
            const std::size_t j = arg[i];
            cand.ratio = static_cast<double>(count[j]) / (dist[order[j]] + kEps);
            cand.radius = dist[order[j]] + kEps;
            cand.center = p;
            cand.count = count[j];
        }
        if (dist[q] <= 1.0 && 1.0 <= cap) {
            WitnessInfo one{static_cast<double>(count1), 1.0, p, count1};
            if (better(one, cand)) cand = one;
        }
        if (cand.count > 0 && better(cand, best[q])) best[q] = cand;
    }
}

} // namespace

DensityStratification density_decompose(const PointFamily& family) {
    if (family.size() == 0) throw usage_error("density_decompose: empty family");
    DensityStratification out;
    out.dim = family.dim();
    out.level.assign(family.size(), 0.0);
    out.witness.assign(family.size(), {});

    for (const auto& [k, shell] : family.shells()) {
        const double cap = std::pow(2.0, k);
        const std::size_t m = shell.size();

        std::vector<WitnessInfo> best(family.size());
        {
            // Per-center scans are independent; merge thread-chunk results.
            const std::size_t chunks =
                std::min<std::size_t>(effective_threads(), std::max<std::size_t>(m, 1));
            std::vector<std::vector<WitnessInfo>> local(
                chunks, std::vector<WitnessInfo>(family.size()));
            parallel_for(chunks, [&](std::size_t c) {
                std::vector<double> dist(family.size(), 0.0);
                std::vector<std::size_t> order(m);
                for (std::size_t pi = c; pi < m; pi += chunks) {
                    const std::size_t p = shell[pi];
                    for (std::size_t qi = 0; qi < m; ++qi)
                        dist[shell[qi]] = dist_d1(family, p, shell[qi]);
                    for (std::size_t qi = 0; qi < m; ++qi) order[qi] = shell[qi];
                    std::sort(order.begin(), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  if (dist[a] != dist[b]) return dist[a] < dist[b];
                                  return a < b;
                              });
                    scan_center(dist, order, p, cap, local[c]);
                }
            });
            for (const auto& loc : local)
                for (std::size_t q : shell)
                    if (loc[q].count > 0 && better(loc[q], best[q])) best[q] = loc[q];
        }

        // Strata for this shell.
        std::map<int, Stratum> by_nu;
        for (std::size_t q : shell) {
            if (best[q].count == 0)
                throw internal_error("density_decompose: member escaped detection");
            out.level[q] = best[q].ratio;
            Ball b;
            b.center = point_coords(family, best[q].center);
            b.radius = best[q].radius;
            b.count = best[q].count;
            out.witness[q] = b;
            const int nu = static_cast<int>(std::floor(std::log2(best[q].ratio)));
            auto& st = by_nu[nu];
            st.k = k;
            st.nu = nu;
            st.u = std::pow(2.0, nu);
            st.members.push_back(q);
        }

        // Detected sets are cumulative from above; Vitali selection runs on
        // the member witnesses of each detected set.
        std::vector<std::size_t> cumulative;
        for (auto it = by_nu.rbegin(); it != by_nu.rend(); ++it) {
            Stratum& st = it->second;
            cumulative.insert(cumulative.end(), st.members.begin(), st.members.end());
            st.detected = cumulative;

            // deduplicate witness balls by (center index, radius)
            std::vector<std::size_t> reps(cumulative.begin(), cumulative.end());
            std::sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
                const auto& wa = out.witness[a];
                const auto& wb = out.witness[b];
                if (wa.radius != wb.radius) return wa.radius > wb.radius;
                return std::lexicographical_compare(wa.center.begin(), wa.center.end(),
                                                    wb.center.begin(), wb.center.end());
            });
            std::vector<Ball> chosen;
            for (std::size_t q : reps) {
                const Ball& cand = out.witness[q];
                bool disjoint = true;
                for (const Ball& sel : chosen) {
                    double d2 = 0.0;
                    for (std::size_t c = 0; c < cand.center.size(); ++c) {
                        const double diff = cand.center[c] - sel.center[c];
                        d2 += diff * diff;
                    }
                    if (std::sqrt(d2) <= cand.radius + sel.radius) {
                        disjoint = false;
                        break;
                    }
                }
                if (disjoint) chosen.push_back(cand);
            }
            st.balls = std::move(chosen);
        }
        for (auto& [nu, st] : by_nu) out.strata.push_back(std::move(st));
    }
    return out;
}

DensityCheck density_type_check(const PointFamily& family,
                                const std::vector<std::size_t>& subset, double u,
                                double R) {
    DensityCheck out;
    const std::size_t m = subset.size();
    for (std::size_t pi = 0; pi < m; ++pi) {
        std::vector<double> dist(m);
        for (std::size_t qi = 0; qi < m; ++qi)
            dist[qi] = dist_d1(family, subset[pi], subset[qi]);
        std::vector<double> sorted(dist);
        std::sort(sorted.begin(), sorted.end());
        auto consider = [&](double radius) {
            if (2.0 * radius > R) return;
            const std::size_t count =
                std::upper_bound(sorted.begin(), sorted.end(), radius) - sorted.begin();
            const double ratio = static_cast<double>(count) / (2.0 * radius);
            if (ratio > out.worst_ratio) {
                out.worst_ratio = ratio;
                out.worst_ball.center = point_coords(family, subset[pi]);
                out.worst_ball.radius = radius;
                out.worst_ball.count = count;
            }
        };
        consider(1.0);
        for (std::size_t qi = 0; qi < m; ++qi)
            if (sorted[qi] > 0.0) consider(sorted[qi] + kEps);
    }
    out.ok = out.worst_ratio <= u + 1e-12;
    return out;
}

StratificationChecks verify_stratification(const PointFamily& family,
                                           const DensityStratification& strat) {
    StratificationChecks out;

    // partition per shell
    for (const auto& [k, shell] : family.shells()) {
        std::vector<std::size_t> seen;
        for (const auto& st : strat.strata)
            if (st.k == k) seen.insert(seen.end(), st.members.begin(), st.members.end());
        std::vector<std::size_t> expect(shell);
        std::sort(seen.begin(), seen.end());
        std::sort(expect.begin(), expect.end());
        if (seen != expect) out.partition_ok = false;
    }

    for (const auto& st : strat.strata) {
        const std::size_t shell_count = family.shells().at(st.k).size();
        // Vitali disjointness
        for (std::size_t i = 0; i < st.balls.size(); ++i) {
            for (std::size_t j = i + 1; j < st.balls.size(); ++j) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < st.balls[i].center.size(); ++c) {
                    const double diff = st.balls[i].center[c] - st.balls[j].center[c];
                    d2 += diff * diff;
                }
                if (std::sqrt(d2) <= st.balls[i].radius + st.balls[j].radius)
                    out.vitali_disjoint_ok = false;
            }
        }
        // covering of the detected set by 5x dilates
        for (std::size_t q : st.detected) {
            const auto qc = point_coords(family, q);
            bool covered = false;
            for (const Ball& b : st.balls) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < qc.size(); ++c) {
                    const double diff = qc[c] - b.center[c];
                    d2 += diff * diff;
                }
                if (std::sqrt(d2) <= 5.0 * b.radius + 1e-12) {
                    covered = true;
                    break;
                }
            }
            if (!covered) out.covering_ok = false;
        }
        // radius sum
        double sum = 0.0;
        for (const Ball& b : st.balls) sum += b.radius;
        const double ratio = sum * st.u / static_cast<double>(shell_count);
        out.worst_radius_sum_ratio = std::max(out.worst_radius_sum_ratio, ratio);
        if (sum > (kDensitySlack / st.u) * static_cast<double>(shell_count) + 1e-12)
            out.radius_sum_ok = false;
        // density type of E_k(u) at slack * u
        auto check = density_type_check(family, st.members, kDensitySlack * st.u,
                                        std::pow(2.0, st.k));
        out.worst_density_ratio =
            std::max(out.worst_density_ratio, check.worst_ratio / (kDensitySlack * st.u));
        if (!check.ok) out.density_type_ok = false;
    }
    return out;
}

SupportMeasure support_measure(const PointFamily& family,
                               const std::vector<std::size_t>& members,
                               const std::vector<Ball>& balls, double halfwidth,
                               std::size_t n_samples, std::uint64_t seed) {
    SupportMeasure out;
    if (members.empty() || balls.empty()) return out;
    const int d = family.dim();

    // covering annuli: center y_i, sphere radius r_i, half-width 2 rad* + w
    struct Annulus {
        std::vector<double> y;
        double r;
        double w;
        double vol;
    };
    std::vector<Annulus> cover;
    double total = 0.0;
    for (const Ball& b : balls) {
        Annulus a;
        a.y.assign(b.center.begin(), b.center.end() - 1);
        a.r = b.center.back();
        a.w = 2.0 * 5.0 * b.radius + halfwidth;
        a.vol = annulus_volume(d, a.r, a.w);
        total += a.vol;
        cover.push_back(std::move(a));
    }
    out.covering_bound = total;

    // true-support membership over the stratum members
    std::vector<double> flat;
    for (std::size_t q : members) {
        auto y = family.center(q);
        flat.insert(flat.end(), y.begin(), y.end());
        flat.push_back(family.radius(q));
    }
    const PointFamily sub(d, std::move(flat));
    const ShellIndex index(sub, halfwidth);

    std::vector<double> cum(cover.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cover.size(); ++i) {
        acc += cover[i].vol;
        cum[i] = acc;
    }

    std::vector<double> vals(n_samples);
    parallel_for(n_samples, [&](std::size_t s) {
        Rng rng(seed, s);
        const double pick = rng.uniform() * total;
        std::size_t i = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
        if (i >= cover.size()) i = cover.size() - 1;
        const Annulus& a = cover[i];
        const double lo = std::max(a.r - a.w, 0.0), hi = a.r + a.w;
        const double rho = std::pow(
            std::pow(lo, d) + rng.uniform() * (std::pow(hi, d) - std::pow(lo, d)),
            1.0 / d);
        auto dir = rng.unit_vector(d);
        std::vector<double> x(d);
        for (int c = 0; c < d; ++c) x[c] = a.y[c] + rho * dir[c];

        // multiplicity within the covering mixture
        int mult = 0;
        for (const Annulus& other : cover) {
            double d2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = x[c] - other.y[c];
                d2 += diff * diff;
            }
            if (std::abs(std::sqrt(d2) - other.r) <= other.w) ++mult;
        }
        if (mult == 0) {
            vals[s] = 0.0;
            return;
        }
        const bool in_support = index.multiplicity(x) > 0;
        vals[s] = in_support ? total / static_cast<double>(mult) : 0.0;
    });

    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n_samples);
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= n_samples > 1 ? static_cast<double>(n_samples - 1) : 1.0;
    out.mc_estimate = mean;
    out.mc_std_error = std::sqrt(var / static_cast<double>(n_samples));
    return out;
}

} // namespace rml
