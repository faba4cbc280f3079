#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rml/point_family.hpp"

namespace rml {

/// Uniform-random 1-separated family: n members, centers in a box whose
/// volume scales with n, radii uniform in the shell [2^k, 2^{k+1}).
PointFamily gen_uniform_family(int d, std::size_t n, int k, std::uint64_t seed);

/// Unit-spacing lattice patch: m^3 points on a 3-dimensional slice, all with
/// the same radius 2^k (one shell, maximal clustering).
PointFamily gen_lattice3(int d, int m, int k);

/// Lattice patch in centers and radii: m^3 centers x m integer radii in
/// [2^k, 2^k + m), m <= 2^k.
PointFamily gen_lattice4(int d, int m, int k);

/// Annulus-concentrated family: n centers near a sphere of radius R, radii
/// in the shell [2^k, 2^{k+1}).
PointFamily gen_annulus_family(int d, std::size_t n, int k, double R,
                               std::uint64_t seed);

/// Members on the integer lattice with radii >= 2^ell, for the large-radius
/// checks: n distinct points in [0, 2^{ell+3})^d x [2^ell, 2^{ell+1}).
PointFamily gen_large_radii_family(int d, std::size_t n, int ell, std::uint64_t seed);

/// Coefficients of modulus <= 1: unit random phases, or random magnitudes.
std::vector<std::complex<double>> gen_coeffs(std::size_t n, bool unit_modulus,
                                             std::uint64_t seed);

} // namespace rml
