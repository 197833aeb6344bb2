#pragma once

#include <cstdint>
#include <vector>

#include "pst/types.hpp"

namespace pst {

/// Deterministic unit directions on S^{d-1} from a seeded generator.
std::vector<RealVector> sphere_directions(Eigen::Index dim, std::size_t count,
                                          std::uint64_t seed);

/// Deterministic samples in the ball of given radius around a center,
/// radii pushed away from zero (fraction in [r_lo, 1] of radius).
std::vector<PhasePoint> ball_samples(const PhasePoint& center, double radius,
                                     std::size_t count, std::uint64_t seed,
                                     double r_lo = 0.25);

/// Lattice of points on the hyperplane {coords[frozen_index] = frozen_value}
/// around a center: per free coordinate an odd number of nodes spanning
/// [-extent, extent]. Only the listed coordinates vary.
std::vector<PhasePoint> plane_lattice(const PhasePoint& center,
                                      const std::vector<Eigen::Index>& free_coords,
                                      double extent, Eigen::Index nodes_per_axis);

}  // namespace pst
