#pragma once

#include <cstdint>
#include <vector>

#include "rml/point_family.hpp"

namespace rml {

/// Ball in R^{d+1} over (center, radius)-space.
struct Ball {
    std::vector<double> center; // d+1 coordinates: (y_1..y_d, r)
    double radius = 0.0;
    /// Number of shell members inside (witnessing the detection threshold).
    std::size_t count = 0;
};

/// One stratum E_k(u): shell members whose detected density level lands at
/// u = 2^nu, together with the Vitali balls selected for the detected set
/// E_k_hat(u) (every member detected at level >= u).
struct Stratum {
    int k = 0;
    int nu = 0;
    double u = 1.0;
    std::vector<std::size_t> members;  // E_k(u), disjoint across nu
    std::vector<std::size_t> detected; // E_k_hat(u) = union of members, nu' >= nu
    std::vector<Ball> balls;           // greedy Vitali selection, disjoint
};

/// Density decomposition of a point family: per shell k, each member is
/// tested against every candidate ball (centers at shell members, radii
/// from the pairwise-distance set capped at 2^k, inflated by eps = 1e-9,
/// plus the radius-1 singleton ball); its level is the largest count/radius
/// ratio of a candidate ball containing it, and strata collect members whose
/// level falls in [2^nu, 2^{nu+1}).
struct DensityStratification {
    int dim = 0;
    /// Detected level per family member (max count/radius over candidates).
    std::vector<double> level;
    /// Witness ball per member (deterministic tie-break: higher ratio, then
    /// smaller radius, then smaller center index).
    std::vector<Ball> witness;
    /// Occupied strata, ordered by (k, nu).
    std::vector<Stratum> strata;
};

DensityStratification density_decompose(const PointFamily& family);

/// Ball test behind the density-type definition: over all candidate balls
/// with diameter <= R (centers at subset points, radii from the subset's
/// pairwise distances inflated by eps, plus radius 1), find the worst
/// #(B cap S)/diam(B) and compare with u.
struct DensityCheck {
    bool ok = true;
    double worst_ratio = 0.0;
    Ball worst_ball;
};
DensityCheck density_type_check(const PointFamily& family,
                                const std::vector<std::size_t>& subset, double u,
                                double R);

/// Implementation slack of the finite ball test: detection over centered
/// balls sandwiches true density-type membership within this factor.
inline constexpr double kDensitySlack = 2.0;

/// Exactness witnesses for one stratification.
struct StratificationChecks {
    bool partition_ok = true;      // strata partition each shell
    bool vitali_disjoint_ok = true;
    bool covering_ok = true;       // 5x dilates cover the detected sets
    bool radius_sum_ok = true;     // sum rad(B_i) <= (kDensitySlack/u) #E_k
    bool density_type_ok = true;   // E_k(u) of type (kDensitySlack*u, 2^k)
    double worst_radius_sum_ratio = 0.0; // max over strata of sum*u/#E_k
    double worst_density_ratio = 0.0;    // max over strata of ratio/(2u)
};
StratificationChecks verify_stratification(const PointFamily& family,
                                           const DensityStratification& strat);

/// Support-measure bound for the members of one stratum: (a) the closed-form
/// covering bound (annuli built on the 5x-dilated Vitali balls, half-width
/// 2 rad(B*) + w) and (b) a Monte-Carlo measure of the true union of
/// supports, estimated from the covering mixture so that (b) <= (a) holds
/// pathwise, not just in expectation.
struct SupportMeasure {
    double covering_bound = 0.0;
    double mc_estimate = 0.0;
    double mc_std_error = 0.0;
};
SupportMeasure support_measure(const PointFamily& family,
                               const std::vector<std::size_t>& members,
                               const std::vector<Ball>& balls, double halfwidth,
                               std::size_t n_samples, std::uint64_t seed);

} // namespace rml
