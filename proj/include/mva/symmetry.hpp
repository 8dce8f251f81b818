#pragma once

#include <string>
#include <vector>

#include "mva/linalg.hpp"

namespace mva {

/// A finite rotational point group acting on SO(3) by right multiplication.
/// Elements are exact-as-possible rotation matrices, identity first, the rest
/// in a deterministic order. Closure under multiplication is verified at
/// construction.
struct SymmetryGroup {
  std::string name;
  std::vector<Eigen::Matrix3d> elements;

  std::size_t order() const { return elements.size(); }

  /// Smallest rotation angle among non-identity elements (pi for C1 by
  /// convention, since the group then puts no constraint below a half turn).
  double min_rotation_angle() const;
};

/// Group lookup by name. Supported names: C1, C2, C3, C4, C6, D2, D3, D4, D6,
/// T (tetrahedral, order 12), O (octahedral, order 24). Throws Error for
/// unknown names.
SymmetryGroup symmetry_group(const std::string& name);

/// Coset representative of R under the group: R * s for the element s that
/// brings R closest to `anchor` in rotation angle (equivalently, maximizes
/// trace(anchor^T R s)). Ties resolve to the earliest element in the group's
/// deterministic order.
Eigen::Matrix3d quotient_representative(const Eigen::Matrix3d& r, const SymmetryGroup& group,
                                        const Eigen::Matrix3d& anchor);

/// Misorientation angle between two rotations modulo the group: the smallest
/// rotation angle of a^T b s over group elements s.
double misorientation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                            const SymmetryGroup& group);

}  // namespace mva
