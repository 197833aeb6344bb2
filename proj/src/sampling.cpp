#include "pst/sampling.hpp"

#include <cmath>
#include <random>

namespace pst {

std::vector<RealVector> sphere_directions(Eigen::Index dim, std::size_t count,
                                          std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<RealVector> out;
    out.reserve(count);
    while (out.size() < count) {
        RealVector v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = nd(gen);
        double n = v.norm();
        if (n < 1e-8) continue;
        out.push_back(v / n);
    }
    return out;
}

std::vector<PhasePoint> ball_samples(const PhasePoint& center, double radius,
                                     std::size_t count, std::uint64_t seed, double r_lo) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const Eigen::Index d = center.dim();
    std::vector<PhasePoint> out;
    out.reserve(count);
    while (out.size() < count) {
        RealVector v(d);
        for (Eigen::Index i = 0; i < d; ++i) v[i] = nd(gen);
        double n = v.norm();
        if (n < 1e-8) continue;
        double r = radius * (r_lo + (1.0 - r_lo) * std::pow(ud(gen), 1.0 / double(d)));
        out.emplace_back(RealVector(center.coords + (r / n) * v));
    }
    return out;
}

std::vector<PhasePoint> plane_lattice(const PhasePoint& center,
                                      const std::vector<Eigen::Index>& free_coords,
                                      double extent, Eigen::Index nodes_per_axis) {
    if (nodes_per_axis % 2 == 0) ++nodes_per_axis;  // keep the center on the lattice
    std::vector<PhasePoint> out;
    std::size_t total = 1;
    for (std::size_t k = 0; k < free_coords.size(); ++k) total *= std::size_t(nodes_per_axis);
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        RealVector c = center.coords;
        std::size_t rem = idx;
        for (auto coord : free_coords) {
            Eigen::Index node = Eigen::Index(rem % std::size_t(nodes_per_axis));
            rem /= std::size_t(nodes_per_axis);
            double frac = nodes_per_axis == 1
                              ? 0.0
                              : -1.0 + 2.0 * double(node) / double(nodes_per_axis - 1);
            c[coord] += extent * frac;
        }
        out.emplace_back(std::move(c));
    }
    return out;
}

}  // namespace pst
