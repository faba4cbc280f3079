#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "rml/bump.hpp"
#include "rml/point_family.hpp"
#include "rml/shell.hpp"

namespace rml {

/// Volume of the annulus of half-width w around the sphere of radius r in R^d.
double annulus_volume(int d, double r, double w);

/// Bucket index over centers (cell size 1) with per-bucket radius-sorted
/// member lists; queries return the members whose annulus can contain a point.
class ShellIndex {
public:
    ShellIndex(const PointFamily& family, double halfwidth);

    /// Appends indices of members with | |x - y_i| - r_i | <= halfwidth.
    void query(std::span<const double> x, std::vector<std::size_t>& out) const;
    /// Number of members whose annulus contains x.
    int multiplicity(std::span<const double> x) const;

private:
    struct Bucket {
        std::vector<double> center;
        std::vector<std::pair<double, std::size_t>> members; // (r, index) sorted
    };
    const PointFamily* family_;
    double halfwidth_;
    double cell_halfdiag_;
    std::vector<Bucket> buckets_;
};

struct LpEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Linear combination sum_i c_i (sigma_{r_i} * psi)(. - y_i) over a point
/// family; evaluable pointwise, with an exact Gram L2 norm and Monte-Carlo
/// L^p estimates.
class SynthField {
public:
    SynthField(PointFamily family, std::vector<std::complex<double>> coeffs,
               std::shared_ptr<const Bump> bump);

    // The spatial index points into the stored family; fields are built in
    // place (factories rely on guaranteed copy elision).
    SynthField(const SynthField&) = delete;
    SynthField& operator=(const SynthField&) = delete;
    SynthField(SynthField&&) = delete;
    SynthField& operator=(SynthField&&) = delete;

    const PointFamily& family() const { return family_; }
    const Bump& bump() const { return *bump_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

    /// Pointwise value; exactly zero outside the union of the closed annuli
    /// of half-width bump().annulus_halfwidth() around the member spheres.
    std::complex<double> eval(std::span<const double> x) const;

    /// Exact L2 norm via the Gram quadratic form, exploiting the
    /// disjoint-support zero pattern and the (r, r', |y-y'|) dependence of
    /// the entries (memoized).
    double l2() const;

    /// Importance-sampled Monte-Carlo estimate of the L^p norm: members are
    /// drawn with probability proportional to annulus volume, points
    /// uniformly in the annulus, and the mixture density reweights the
    /// average. Deterministic in (seed); independent of thread count.
    LpEstimate lp(double p, std::size_t n_samples, std::uint64_t seed) const;

    /// Gram matrix of the family (for positivity diagnostics on small sets).
    std::vector<double> gram_matrix() const;

    /// Total volume of the sampling mixture (sum of member annuli volumes).
    double mixture_volume() const { return total_volume_; }

    /// CSV rows y_1,..,y_d,r,re(c),im(c) with a header naming the BumpSpec.
    void save_csv(std::ostream& os) const;
    static SynthField load_csv(std::istream& is);

private:
    double gram_cached(double dist, double r1, double r2) const;

    PointFamily family_;
    std::vector<std::complex<double>> coeffs_;
    std::shared_ptr<const Bump> bump_;
    ShellIndex index_;
    std::vector<std::size_t> profile_of_member_;
    std::vector<ShellProfile> profiles_; // one per distinct radius
    std::vector<double> volumes_;        // per-member annulus volume
    std::vector<double> cum_volumes_;
    double total_volume_ = 0.0;
    mutable std::map<std::tuple<double, double, double>, double> gram_cache_;
    mutable std::mutex gram_mutex_;
};

} // namespace rml
