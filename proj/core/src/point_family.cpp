#include "rml/point_family.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rml/errors.hpp"

namespace rml {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

PointFamily::PointFamily(int dim, std::vector<double> flat_coords)
    : dim_(dim), count_(0), coords_(std::move(flat_coords)) {
    if (dim_ < 1) throw domain_error("PointFamily: dimension must be >= 1");
    const std::size_t stride = dim_ + 1;
    if (coords_.size() % stride != 0)
        throw domain_error("PointFamily: coordinate array has wrong length");
    count_ = coords_.size() / stride;

    for (std::size_t i = 0; i < count_; ++i) {
        const double r = radius(i);
        if (!(r >= 1.0))
            throw domain_error("PointFamily: radius of member " + std::to_string(i) +
                               " is below 1");
        for (std::size_t c = 0; c <= static_cast<std::size_t>(dim_); ++c)
            if (!std::isfinite(coords_[i * stride + c]))
                throw domain_error("PointFamily: non-finite coordinate");
        const int k = static_cast<int>(std::floor(std::log2(r)));
        shells_[k].push_back(i);
    }

    // 1-separation in R^{d+1}; tiny slack absorbs distance roundoff so unit
    // lattices are admissible.
    for (std::size_t i = 0; i < count_; ++i) {
        for (std::size_t j = i + 1; j < count_; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < stride; ++c) {
                const double diff = coords_[i * stride + c] - coords_[j * stride + c];
                d2 += diff * diff;
            }
            if (d2 < 1.0 - 1e-9)
                throw domain_error("PointFamily: members " + std::to_string(i) + " and " +
                                   std::to_string(j) + " violate 1-separation");
        }
    }
}

PointFamily PointFamily::from_points(int dim,
                                     const std::vector<std::vector<double>>& centers,
                                     const std::vector<double>& radii) {
    if (centers.size() != radii.size())
        throw usage_error("PointFamily: centers/radii length mismatch");
    std::vector<double> flat;
    flat.reserve(centers.size() * (dim + 1));
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (static_cast<int>(centers[i].size()) != dim)
            throw usage_error("PointFamily: center dimension mismatch");
        flat.insert(flat.end(), centers[i].begin(), centers[i].end());
        flat.push_back(radii[i]);
    }
    return PointFamily(dim, std::move(flat));
}

double PointFamily::pair_distance(std::size_t i, std::size_t j) const {
    const std::size_t stride = dim_ + 1;
    double d2 = 0.0;
    for (std::size_t c = 0; c < stride; ++c) {
        const double diff = coords_[i * stride + c] - coords_[j * stride + c];
        d2 += diff * diff;
    }
    return std::sqrt(d2);
}

double PointFamily::center_distance(std::size_t i, std::size_t j) const {
    const std::size_t stride = dim_ + 1;
    double d2 = 0.0;
    for (int c = 0; c < dim_; ++c) {
        const double diff = coords_[i * stride + c] - coords_[j * stride + c];
        d2 += diff * diff;
    }
    return std::sqrt(d2);
}

void PointFamily::save_csv(std::ostream& os) const {
    os << "# dim=" << dim_ << "\n";
    const std::size_t stride = dim_ + 1;
    for (std::size_t i = 0; i < count_; ++i) {
        for (std::size_t c = 0; c < stride; ++c) {
            if (c) os << ",";
            os << format17(coords_[i * stride + c]);
        }
        os << "\n";
    }
}

PointFamily PointFamily::load_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw usage_error("PointFamily: empty input");
    int dim = 0;
    {
        std::istringstream hs(line);
        std::string tok;
        hs >> tok;
        if (tok != "#") throw usage_error("PointFamily: missing header");
        while (hs >> tok)
            if (tok.rfind("dim=", 0) == 0) dim = std::stoi(tok.substr(4));
    }
    if (dim < 1) throw usage_error("PointFamily: header lacks dim");
    std::vector<double> flat;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell;
        int ncol = 0;
        while (std::getline(ls, cell, ',')) {
            flat.push_back(std::stod(cell));
            ++ncol;
        }
        if (ncol != dim + 1)
            throw usage_error("PointFamily: row has " + std::to_string(ncol) +
                              " columns, expected " + std::to_string(dim + 1));
    }
    return PointFamily(dim, std::move(flat));
}

void PointFamily::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw usage_error("PointFamily: cannot open " + path);
    save_csv(os);
}

PointFamily PointFamily::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw usage_error("PointFamily: cannot open " + path);
    return load_csv(is);
}

} // namespace rml
