#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rml {

/// A finite 1-separated set of (center, radius) pairs in R^d x [1, inf),
/// with dyadic shells indexed by k (radii in [2^k, 2^{k+1})). Separation is
/// measured in R^{d+1} and checked on construction.
class PointFamily {
public:
    PointFamily(int dim, std::vector<double> flat_coords);

    static PointFamily from_points(int dim,
                                   const std::vector<std::vector<double>>& centers,
                                   const std::vector<double>& radii);

    int dim() const { return dim_; }
    std::size_t size() const { return count_; }
    std::span<const double> center(std::size_t i) const {
        return {coords_.data() + i * (dim_ + 1), static_cast<std::size_t>(dim_)};
    }
    double radius(std::size_t i) const { return coords_[i * (dim_ + 1) + dim_]; }

    /// Euclidean distance between members i and j in R^{d+1}.
    double pair_distance(std::size_t i, std::size_t j) const;
    /// Distance between the centers only (in R^d).
    double center_distance(std::size_t i, std::size_t j) const;

    /// Shell index k = floor(log2 r) -> member indices.
    const std::map<int, std::vector<std::size_t>>& shells() const { return shells_; }

    /// CSV rows y_1,...,y_d,r with a `# dim=<d>` header.
    void save_csv(std::ostream& os) const;
    static PointFamily load_csv(std::istream& is);
    void save_csv(const std::string& path) const;
    static PointFamily load_csv(const std::string& path);

private:
    int dim_;
    std::size_t count_;
    std::vector<double> coords_; // n x (d+1), row-major (y..., r)
    std::map<int, std::vector<std::size_t>> shells_;
};

} // namespace rml
