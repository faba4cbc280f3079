#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rml/grid_field.hpp"

namespace rml {

/// Dyadic cube on the periodized grid, in cell units: level m means
/// sidelength 2^m cells, corner z (per axis) indexes the cube
/// [z 2^m, (z+1) 2^m) along that axis.
struct DyadicCube {
    int level = 0;
    int cx = 0;
    int cy = 0; // unused extent collapses to 0 in one dimension
    bool operator==(const DyadicCube&) const = default;
    bool operator<(const DyadicCube& o) const {
        if (level != o.level) return level < o.level;
        if (cx != o.cx) return cx < o.cx;
        return cy < o.cy;
    }
};

/// Discrete Hardy-Littlewood maximal function over centered axis-aligned
/// cubes (all radii in cell units up to half the domain), periodized. Exact
/// on the grid.
std::vector<double> hl_maximal(const std::vector<double>& g, int dim, int log2_n);

/// Whitney decomposition of a cell mask: all maximal dyadic cubes whose
/// 20-fold dilate (cells intersecting the scaled cube) lies inside the mask.
/// Admissibility is inherited by children, so the selected cubes tile the
/// admissible region with disjoint interiors; mask cells not admissible at
/// the finest level are reported as uncoverable.
class WhitneyDecomposition {
public:
    WhitneyDecomposition(const std::vector<std::uint8_t>& mask, int dim, int log2_n);

    const std::vector<DyadicCube>& cubes() const { return cubes_; }
    const std::vector<std::size_t>& uncovered_cells() const { return uncovered_; }

    bool admissible(const DyadicCube& q) const;
    /// Unique Whitney cube containing the admissible cube q (ancestor-or-self).
    DyadicCube containing_cube(DyadicCube q) const;

    int dim() const { return dim_; }
    int log2_n() const { return log2_n_; }

private:
    int dim_;
    int log2_n_;
    int n_;
    // admissible_[m] is a bitmap over corners at level m
    std::vector<std::vector<std::uint8_t>> admissible_;
    std::vector<DyadicCube> cubes_;
    std::vector<std::size_t> uncovered_;
};

std::vector<DyadicCube> whitney(const std::vector<std::uint8_t>& mask, int dim,
                                int log2_n);

/// Peetre maximal square function: for each x,
///   S(x) = ( sum_s sup_{|y| <= 10 dim 2^{-s}} |f_s(x+y)|^2 )^{1/2},
/// the sup running over grid points in the closed Euclidean ball. Exact.
std::vector<double> peetre_S(const GridField& f);

/// Atoms of one threshold level j: per (band s, Whitney cube W), the list of
/// level-(log2_n - s) cubes Q in Q^s_j contained in W. Values are read off
/// the band samples, so atoms stay sparse.
struct AtomSet {
    int j = 0;
    double omega_measure = 0.0;      // meas(Omega_j)
    double omega_star_measure = 0.0; // meas(Omega_j*)
    std::vector<DyadicCube> whitney_cubes;
    /// (band s, index into whitney_cubes) -> cube corners of Q^s_j inside W
    std::map<std::pair<int, std::size_t>, std::vector<DyadicCube>> atoms;
};

struct AtomBuild {
    std::vector<AtomSet> levels;
    int j_min = 0;
    int j_max = 0;
    std::vector<double> sf; // the Peetre function used for the thresholds
};

/// Builds the level sets Omega_j = {S f > 2^j} (strict), their maximal-
/// function dilations Omega_j*, Whitney decompositions, and the atom cube
/// families. With j_min > j_max the range is derived from the range of S f,
/// which makes the band-wise reconstruction sum exactly.
AtomBuild build_atoms(const GridField& f, int j_min = 1, int j_max = 0);

/// Infinity norm of the atom A_{s,W,j} (max |f_s| over its cubes).
double atom_sup(const GridField& f, const std::vector<DyadicCube>& cubes, int s);
/// Squared L2 norm of the atom against the cell measure.
double atom_l2_sq(const GridField& f, const std::vector<DyadicCube>& cubes, int s);

} // namespace rml
