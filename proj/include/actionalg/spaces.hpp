#pragma once

// Cayley graphs of free products as countable metric spaces with the
// left-multiplication action.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "actionalg/groups.hpp"

namespace actionalg {

/// Points of a Cayley space are group elements.
using Point = GroupElement;

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

class CayleySpace {
 public:
  explicit CayleySpace(Group group, std::size_t ball_cap = kDefaultBallCap);

  const Group& group() const { return group_; }
  Point base_point() const { return group_.identity(); }
  std::size_t ball_cap() const { return ball_cap_; }

  /// g . x = gx.
  Point apply(const GroupElement& g, const Point& x) const { return group_.multiply(g, x); }

  /// Left-invariant word metric |x^-1 y|.
  std::int64_t distance(const Point& x, const Point& y) const;

  /// Points at distance <= radius in breadth-first order: generator order,
  /// positive exponent before negative. Throws BudgetExceeded past ball_cap.
  std::vector<Point> enumerate_ball(const Point& center, int radius) const;

  /// Right-multiplication neighbours x s^{+-1} in enumeration order.
  std::vector<Point> neighbours(const Point& x) const;

 private:
  Group group_;
  std::size_t ball_cap_;
};

struct OrbitDecomposition {
  std::vector<Point> representatives;
  std::unordered_map<Point, std::size_t, GroupElementHash> membership;

  std::size_t orbit_of(const Point& x) const { return membership.at(x); }
};

/// Greedy decomposition of a finite ball into orbits of <generators>, each
/// orbit closed under the generators and their inverses inside the ball only.
OrbitDecomposition orbit_decompose(const CayleySpace& space,
                                   std::span<const GroupElement> subgroup_generators,
                                   std::span<const Point> ball);

struct FaithfulnessReport {
  std::map<GroupElement, Point> witnesses;
  std::vector<GroupElement> violations;
  bool pass() const { return violations.empty(); }
};

/// Every nontrivial reduced word of length <= max_length must move some point
/// of the radius-ball around the base point.
FaithfulnessReport faithfulness_check(const CayleySpace& space, int max_length, int radius);

}  // namespace actionalg
