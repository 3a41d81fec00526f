#include "actionalg/spaces.hpp"

#include <deque>
#include <unordered_set>

namespace actionalg {

CayleySpace::CayleySpace(Group group, std::size_t ball_cap)
    : group_(std::move(group)), ball_cap_(ball_cap) {}

std::int64_t CayleySpace::distance(const Point& x, const Point& y) const {
  return group_.word_length(group_.multiply(group_.invert(x), y));
}

std::vector<Point> CayleySpace::neighbours(const Point& x) const {
  std::vector<Point> out;
  const auto& p = group_.presentation();
  out.reserve(2 * p.size());
  for (std::size_t f = 0; f < p.size(); ++f) {
    const int fi = static_cast<int>(f);
    out.push_back(group_.multiply(x, group_.generator(fi, 1)));
    // order 2: s^-1 = s, already listed
    if (p.factor(f).order != 2) out.push_back(group_.multiply(x, group_.generator(fi, -1)));
  }
  return out;
}

std::vector<Point> CayleySpace::enumerate_ball(const Point& center, int radius) const {
  if (radius < 0) throw DomainError("ball radius must be nonnegative");
  group_.check(center);
  std::vector<Point> ball{center};
  std::unordered_set<Point, GroupElementHash> seen{center};
  std::size_t layer_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t layer_end = ball.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (Point& y : neighbours(ball[i])) {
        if (seen.insert(y).second) {
          if (ball.size() >= ball_cap_) {
            throw BudgetExceeded("ball of radius " + std::to_string(radius) +
                                 " exceeds the cap of " + std::to_string(ball_cap_) + " points");
          }
          ball.push_back(std::move(y));
        }
      }
    }
    layer_begin = layer_end;
  }
  return ball;
}

OrbitDecomposition orbit_decompose(const CayleySpace& space,
                                   std::span<const GroupElement> subgroup_generators,
                                   std::span<const Point> ball) {
  if (ball.empty()) throw DegenerateInput("orbit decomposition needs a nonempty ball");
  const Group& G = space.group();
  std::vector<GroupElement> moves;
  for (const GroupElement& s : subgroup_generators) {
    moves.push_back(s);
    moves.push_back(G.invert(s));
  }
  const std::unordered_set<Point, GroupElementHash> in_ball(ball.begin(), ball.end());

  OrbitDecomposition out;
  for (const Point& x : ball) {
    if (out.membership.contains(x)) continue;
    const std::size_t label = out.representatives.size();
    out.representatives.push_back(x);
    out.membership.emplace(x, label);
    std::deque<Point> frontier{x};
    while (!frontier.empty()) {
      const Point y = std::move(frontier.front());
      frontier.pop_front();
      for (const GroupElement& s : moves) {
        Point z = space.apply(s, y);
        if (in_ball.contains(z) && out.membership.emplace(z, label).second) {
          frontier.push_back(std::move(z));
        }
      }
    }
  }
  return out;
}

FaithfulnessReport faithfulness_check(const CayleySpace& space, int max_length, int radius) {
  FaithfulnessReport report;
  if (max_length <= 0) return report;
  const auto words = space.enumerate_ball(space.base_point(), max_length);
  const auto ball = space.enumerate_ball(space.base_point(), std::max(radius, 0));
  for (const GroupElement& w : words) {
    if (w.is_identity()) continue;
    bool moved = false;
    for (const Point& x : ball) {
      if (space.apply(w, x) != x) {
        report.witnesses.emplace(w, x);
        moved = true;
        break;
      }
    }
    if (!moved) report.violations.push_back(w);
  }
  return report;
}

}  // namespace actionalg
