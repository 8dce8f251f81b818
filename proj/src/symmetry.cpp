#include "mva/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mva/errors.hpp"

namespace mva {

namespace {

Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

bool same_rotation(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return (a - b).cwiseAbs().maxCoeff() < 1e-9;
}

/// Multiplicative closure of a generator set, deduplicated to 1e-9.
std::vector<Eigen::Matrix3d> close_group(std::vector<Eigen::Matrix3d> gens) {
  std::vector<Eigen::Matrix3d> elems;
  elems.push_back(Eigen::Matrix3d::Identity());
  auto insert_if_new = [&elems](const Eigen::Matrix3d& m) {
    for (const auto& e : elems)
      if (same_rotation(e, m)) return false;
    elems.push_back(m);
    return true;
  };
  for (const auto& g : gens) insert_if_new(g);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t n = elems.size();
    if (n > 64) throw Error("symmetry_group: closure did not terminate");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (insert_if_new(elems[i] * elems[j])) grew = true;
  }
  // Deterministic order: identity first, then by (angle, entries lexicographic).
  std::sort(elems.begin() + 1, elems.end(), [](const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    const double aa = rotation_angle(a);
    const double ab = rotation_angle(b);
    if (std::abs(aa - ab) > 1e-9) return aa < ab;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (std::abs(a(i, j) - b(i, j)) > 1e-9) return a(i, j) < b(i, j);
    return false;
  });
  return elems;
}

void verify_closure(const std::vector<Eigen::Matrix3d>& elems) {
  for (const auto& a : elems)
    for (const auto& b : elems) {
      const Eigen::Matrix3d p = a * b;
      bool found = false;
      for (const auto& e : elems)
        if (same_rotation(e, p)) {
          found = true;
          break;
        }
      if (!found) throw Error("symmetry_group: element set is not closed");
    }
}

}  // namespace

double SymmetryGroup::min_rotation_angle() const {
  double best = M_PI;
  for (std::size_t i = 1; i < elements.size(); ++i)
    best = std::min(best, rotation_angle(elements[i]));
  return best;
}

SymmetryGroup symmetry_group(const std::string& name) {
  const Eigen::Vector3d ex(1, 0, 0), ez(0, 0, 1), diag(1, 1, 1);
  std::vector<Eigen::Matrix3d> gens;
  if (name == "C1") {
    // identity only
  } else if (name == "C2" || name == "C3" || name == "C4" || name == "C6") {
    const int n = name[1] - '0';
    gens.push_back(axis_angle(ez, 2.0 * M_PI / n));
  } else if (name == "D2" || name == "D3" || name == "D4" || name == "D6") {
    const int n = name[1] - '0';
    gens.push_back(axis_angle(ez, 2.0 * M_PI / n));
    gens.push_back(axis_angle(ex, M_PI));
  } else if (name == "T") {
    gens.push_back(axis_angle(ex, M_PI));
    gens.push_back(axis_angle(diag, 2.0 * M_PI / 3));
  } else if (name == "O") {
    gens.push_back(axis_angle(ez, M_PI / 2));
    gens.push_back(axis_angle(diag, 2.0 * M_PI / 3));
  } else {
    throw Error("symmetry_group: unknown group name '" + name + "'");
  }
  SymmetryGroup group{name, close_group(std::move(gens))};
  verify_closure(group.elements);
  return group;
}

Eigen::Matrix3d quotient_representative(const Eigen::Matrix3d& r, const SymmetryGroup& group,
                                        const Eigen::Matrix3d& anchor) {
  double best = -std::numeric_limits<double>::infinity();
  const Eigen::Matrix3d* best_s = nullptr;
  for (const auto& s : group.elements) {
    const double score = (anchor.transpose() * r * s).trace();
    if (score > best + 1e-12) {
      best = score;
      best_s = &s;
    }
  }
  return r * (*best_s);
}

double misorientation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                            const SymmetryGroup& group) {
  const Eigen::Matrix3d rel = a.transpose() * b;
  double best = M_PI;
  for (const auto& s : group.elements) best = std::min(best, rotation_angle(rel * s));
  return best;
}

}  // namespace mva
