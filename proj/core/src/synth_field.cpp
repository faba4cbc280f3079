#include "rml/synth_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rml/bessel.hpp"
#include "rml/errors.hpp"
#include "rml/parallel.hpp"
#include "rml/rng.hpp"

namespace rml {

double annulus_volume(int d, double r, double w) {
    const double outer = r + w;
    const double inner = std::max(r - w, 0.0);
    return ball_volume(d) * (std::pow(outer, d) - std::pow(inner, d));
}

ShellIndex::ShellIndex(const PointFamily& family, double halfwidth)
    : family_(&family), halfwidth_(halfwidth) {
    const int d = family.dim();
    cell_halfdiag_ = 0.5 * std::sqrt(static_cast<double>(d));
    std::map<std::vector<long>, std::size_t> cells;
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto y = family.center(i);
        std::vector<long> key(d);
        for (int c = 0; c < d; ++c) key[c] = static_cast<long>(std::floor(y[c]));
        auto [it, inserted] = cells.emplace(key, buckets_.size());
        if (inserted) {
            Bucket b;
            b.center.resize(d);
            for (int c = 0; c < d; ++c) b.center[c] = key[c] + 0.5;
            buckets_.push_back(std::move(b));
        }
        buckets_[it->second].members.emplace_back(family.radius(i), i);
    }
    for (auto& b : buckets_) std::sort(b.members.begin(), b.members.end());
}

void ShellIndex::query(std::span<const double> x, std::vector<std::size_t>& out) const {
    const int d = family_->dim();
    for (const auto& b : buckets_) {
        double d2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double diff = x[c] - b.center[c];
            d2 += diff * diff;
        }
        const double dist = std::sqrt(d2);
        const double lo = dist - cell_halfdiag_ - halfwidth_;
        const double hi = dist + cell_halfdiag_ + halfwidth_;
        auto first = std::lower_bound(b.members.begin(), b.members.end(),
                                      std::make_pair(lo, std::size_t{0}));
        for (auto it = first; it != b.members.end() && it->first <= hi; ++it) {
            const std::size_t i = it->second;
            auto y = family_->center(i);
            double e2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = x[c] - y[c];
                e2 += diff * diff;
            }
            if (std::abs(std::sqrt(e2) - family_->radius(i)) <= halfwidth_)
                out.push_back(i);
        }
    }
}

int ShellIndex::multiplicity(std::span<const double> x) const {
    thread_local std::vector<std::size_t> scratch;
    scratch.clear();
    query(x, scratch);
    return static_cast<int>(scratch.size());
}

SynthField::SynthField(PointFamily family, std::vector<std::complex<double>> coeffs,
                       std::shared_ptr<const Bump> bump)
    : family_(std::move(family)),
      coeffs_(std::move(coeffs)),
      bump_(std::move(bump)),
      index_(family_, bump_->annulus_halfwidth()) {
    if (coeffs_.size() != family_.size())
        throw usage_error("SynthField: coefficients must be indexed by the family");
    if (!bump_) throw usage_error("SynthField: missing bump");
    if (family_.dim() != bump_->dim())
        throw usage_error("SynthField: family and bump dimensions differ");

    // One profile per distinct radius, shared across members.
    std::map<double, std::size_t> by_radius;
    profile_of_member_.resize(family_.size());
    std::vector<double> distinct;
    for (std::size_t i = 0; i < family_.size(); ++i) {
        auto [it, inserted] = by_radius.emplace(family_.radius(i), by_radius.size());
        if (inserted) distinct.push_back(family_.radius(i));
        profile_of_member_[i] = it->second;
    }
    profiles_.resize(distinct.size(),
                     ShellProfile{0.0, RadialProfile(2, {0.0, 1.0}, {{0, 0}, {0, 0}}), 0.0});
    parallel_for(distinct.size(), [&](std::size_t j) {
        profiles_[j] = shell_profile(distinct[j], *bump_, ShellVerify::none);
    });

    const double w = bump_->annulus_halfwidth();
    volumes_.resize(family_.size());
    cum_volumes_.resize(family_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < family_.size(); ++i) {
        volumes_[i] = annulus_volume(family_.dim(), family_.radius(i), w);
        acc += volumes_[i];
        cum_volumes_[i] = acc;
    }
    total_volume_ = acc;
}

std::complex<double> SynthField::eval(std::span<const double> x) const {
    thread_local std::vector<std::size_t> hits;
    hits.clear();
    index_.query(x, hits);
    std::complex<double> sum{0.0, 0.0};
    const int d = family_.dim();
    for (std::size_t i : hits) {
        auto y = family_.center(i);
        double d2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double diff = x[c] - y[c];
            d2 += diff * diff;
        }
        sum += coeffs_[i] * profiles_[profile_of_member_[i]].profile(std::sqrt(d2));
    }
    return sum;
}

double SynthField::gram_cached(double dist, double r1, double r2) const {
    if (r2 < r1) std::swap(r1, r2);
    const auto key = std::make_tuple(dist, r1, r2);
    {
        std::lock_guard<std::mutex> lock(gram_mutex_);
        auto it = gram_cache_.find(key);
        if (it != gram_cache_.end()) return it->second;
    }
    const double value = gram_entry_dist(dist, r1, r2, *bump_);
    std::lock_guard<std::mutex> lock(gram_mutex_);
    gram_cache_.emplace(key, value);
    return value;
}

double SynthField::l2() const {
    const std::size_t n = family_.size();
    // Two passes keep memory flat on large families: collect the distinct
    // (dist, r, r') triples, run their quadratures in parallel, then
    // accumulate the quadratic form against the cache.
    std::set<std::tuple<double, double, double>> needed;
    for (std::size_t i = 0; i < n; ++i) {
        needed.emplace(0.0, family_.radius(i), family_.radius(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = family_.center_distance(i, j);
            double r1 = family_.radius(i), r2 = family_.radius(j);
            if (r2 < r1) std::swap(r1, r2);
            if (!shells_disjoint(dist, r1, r2, *bump_)) needed.emplace(dist, r1, r2);
        }
    }
    std::vector<std::tuple<double, double, double>> keys(needed.begin(), needed.end());
    parallel_for(keys.size(), [&](std::size_t idx) {
        const auto& [dist, r1, r2] = keys[idx];
        gram_cached(dist, r1, r2);
    });

    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        quad += std::norm(coeffs_[i]) *
                gram_cached(0.0, family_.radius(i), family_.radius(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = family_.center_distance(i, j);
            if (shells_disjoint(dist, family_.radius(i), family_.radius(j), *bump_))
                continue;
            const double g = gram_cached(dist, family_.radius(i), family_.radius(j));
            quad += 2.0 * g * (coeffs_[i] * std::conj(coeffs_[j])).real();
        }
    }
    return std::sqrt(std::max(quad, 0.0));
}

std::vector<double> SynthField::gram_matrix() const {
    const std::size_t n = family_.size();
    std::vector<double> g(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double dist = family_.center_distance(i, j);
            const double v =
                shells_disjoint(dist, family_.radius(i), family_.radius(j), *bump_)
                    ? 0.0
                    : gram_cached(dist, family_.radius(i), family_.radius(j));
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    }
    return g;
}

LpEstimate SynthField::lp(double p, std::size_t n_samples, std::uint64_t seed) const {
    if (!(p > 0)) throw domain_error("SynthField::lp: p must be positive");
    if (family_.size() == 0 || total_volume_ == 0.0) return {0.0, 0.0, n_samples};
    const int d = family_.dim();
    const double w = bump_->annulus_halfwidth();

    std::vector<double> vals(n_samples);
    parallel_for(n_samples, [&](std::size_t s) {
        Rng rng(seed, s);
        // member by annulus volume
        const double u = rng.uniform() * total_volume_;
        const std::size_t i =
            std::lower_bound(cum_volumes_.begin(), cum_volumes_.end(), u) -
            cum_volumes_.begin();
        const double r = family_.radius(std::min(i, family_.size() - 1));
        auto y = family_.center(std::min(i, family_.size() - 1));
        // radius by the rho^{d-1} density, direction uniform
        const double lo = std::max(r - w, 0.0), hi = r + w;
        const double rho =
            std::pow(std::pow(lo, d) + rng.uniform() * (std::pow(hi, d) - std::pow(lo, d)),
                     1.0 / d);
        auto dir = rng.unit_vector(d);
        std::vector<double> x(d);
        for (int c = 0; c < d; ++c) x[c] = y[c] + rho * dir[c];

        const int mult = index_.multiplicity(x);
        if (mult == 0) {
            vals[s] = 0.0; // boundary-rounding miss; measure zero
            return;
        }
        const double fx = std::abs(eval(x));
        vals[s] = std::pow(fx, p) * total_volume_ / static_cast<double>(mult);
    });

    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n_samples);
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= n_samples > 1 ? static_cast<double>(n_samples - 1) : 1.0;
    const double se_mean = std::sqrt(var / static_cast<double>(n_samples));

    LpEstimate est;
    est.samples = n_samples;
    if (mean <= 0.0) return est;
    est.value = std::pow(mean, 1.0 / p);
    est.std_error = se_mean * est.value / (p * mean);
    return est;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void SynthField::save_csv(std::ostream& os) const {
    const auto& s = bump_->spec();
    os << "# dim=" << s.dim << " support_radius=" << fmt17(s.support_radius)
       << " order=" << s.vanishing_order << " scale=" << fmt17(s.scale) << "\n";
    for (std::size_t i = 0; i < family_.size(); ++i) {
        auto y = family_.center(i);
        for (int c = 0; c < family_.dim(); ++c) os << fmt17(y[c]) << ",";
        os << fmt17(family_.radius(i)) << "," << fmt17(coeffs_[i].real()) << ","
           << fmt17(coeffs_[i].imag()) << "\n";
    }
}

SynthField SynthField::load_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw usage_error("SynthField: empty input");
    BumpSpec spec;
    {
        std::istringstream hs(line);
        std::string tok;
        hs >> tok;
        if (tok != "#") throw usage_error("SynthField: missing header");
        while (hs >> tok) {
            if (tok.rfind("dim=", 0) == 0) spec.dim = std::stoi(tok.substr(4));
            else if (tok.rfind("support_radius=", 0) == 0)
                spec.support_radius = std::stod(tok.substr(15));
            else if (tok.rfind("order=", 0) == 0)
                spec.vanishing_order = std::stoi(tok.substr(6));
            else if (tok.rfind("scale=", 0) == 0) spec.scale = std::stod(tok.substr(6));
        }
    }
    std::vector<double> flat;
    std::vector<std::complex<double>> coeffs;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != spec.dim + 3)
            throw usage_error("SynthField: malformed row: " + line);
        for (int c = 0; c <= spec.dim; ++c) flat.push_back(row[c]);
        coeffs.emplace_back(row[spec.dim + 1], row[spec.dim + 2]);
    }
    return SynthField(PointFamily(spec.dim, std::move(flat)), std::move(coeffs),
                      std::make_shared<Bump>(spec));
}

} // namespace rml
