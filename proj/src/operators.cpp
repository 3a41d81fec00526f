#include "actionalg/operators.hpp"

#include <random>

namespace actionalg {

Complex inner(const StateVector& v, const StateVector& w) {
  // both term lists are sorted by point: merge walk
  Complex sum{0.0, 0.0};
  auto i = v.terms().begin();
  auto j = w.terms().begin();
  while (i != v.terms().end() && j != w.terms().end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += i->second * std::conj(j->second);
      ++i;
      ++j;
    }
  }
  return sum;
}

StateVector dirac(const Point& x) { return StateVector::single(x, 1.0); }

StateVector pi_apply(const CayleySpace& space, const GroupElement& g, const StateVector& v) {
  std::vector<StateVector::Term> out;
  out.reserve(v.support_size());
  for (const auto& [x, c] : v.terms()) out.emplace_back(space.apply(g, x), c);
  return StateVector::from_terms(std::move(out));
}

StateVector op_apply(const CayleySpace& space, const FormalOperator& T, const StateVector& v) {
  std::vector<StateVector::Term> out;
  out.reserve(T.support_size() * v.support_size());
  for (const auto& [g, a] : T.terms()) {
    for (const auto& [x, c] : v.terms()) out.emplace_back(space.apply(g, x), a * c);
  }
  return StateVector::from_terms(std::move(out));
}

FormalOperator adjoint(const Group& group, const FormalOperator& T) {
  std::vector<FormalOperator::Term> out;
  out.reserve(T.support_size());
  for (const auto& [g, a] : T.terms()) out.emplace_back(group.invert(g), std::conj(a));
  return FormalOperator::from_terms(std::move(out));
}

FormalOperator product(const Group& group, const FormalOperator& S, const FormalOperator& T) {
  std::vector<FormalOperator::Term> out;
  out.reserve(S.support_size() * T.support_size());
  for (const auto& [g, a] : S.terms()) {
    for (const auto& [h, b] : T.terms()) out.emplace_back(group.multiply(g, h), a * b);
  }
  return FormalOperator::from_terms(std::move(out));
}

FormalOperator left_translate(const Group& group, const GroupElement& x, const FormalOperator& T) {
  std::vector<FormalOperator::Term> out;
  out.reserve(T.support_size());
  for (const auto& [h, a] : T.terms()) out.emplace_back(group.multiply(x, h), a);
  return FormalOperator::from_terms(std::move(out));
}

FormalOperator conjugate_by(const Group& group, const FormalOperator& T, const GroupElement& by) {
  std::vector<FormalOperator::Term> out;
  out.reserve(T.support_size());
  for (const auto& [h, a] : T.terms()) out.emplace_back(group.conjugate(h, by), a);
  return FormalOperator::from_terms(std::move(out));
}

StateVector indicator_project(const StateVector& v,
                              const std::function<bool(const Point&)>& member) {
  std::vector<StateVector::Term> out;
  for (const auto& t : v.terms()) {
    if (member(t.first)) out.push_back(t);
  }
  return StateVector::from_terms(std::move(out));
}

double triangle_upper_bound(const FormalOperator& T) { return T.l1_norm(); }

namespace {

struct Trimmed {
  StateVector vector;
  bool capped = false;
};

// Unit-normalize, drop small coefficients, keep at most cap entries.
Trimmed normalize_and_trim(const StateVector& u, double prune_threshold, std::size_t cap) {
  const double n = u.norm();
  std::vector<StateVector::Term> terms;
  terms.reserve(u.support_size());
  for (const auto& [x, c] : u.terms()) {
    const Complex scaled = c / n;
    if (std::abs(scaled) >= prune_threshold) terms.emplace_back(x, scaled);
  }
  bool capped = false;
  if (terms.size() > cap) {
    capped = true;
    // keys are distinct and sorted, so this order is total
    std::nth_element(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(cap), terms.end(),
                     [](const StateVector::Term& a, const StateVector::Term& b) {
                       const double ma = std::abs(a.second);
                       const double mb = std::abs(b.second);
                       return ma != mb ? ma > mb : a.first < b.first;
                     });
    terms.resize(cap);
  }
  StateVector v = StateVector::from_terms(std::move(terms));
  const double m = v.norm();
  return {m > 0 ? (1.0 / m) * v : v, capped};
}

int support_radius(const CayleySpace& space, const Point& seed, const StateVector& v) {
  std::int64_t r = 0;
  for (const auto& t : v.terms()) r = std::max(r, space.distance(seed, t.first));
  return static_cast<int>(r);
}

NormEstimate power_iteration(const CayleySpace& space, const FormalOperator& T,
                             const FormalOperator& T_adj, const Point& seed,
                             const NormBudget& budget) {
  NormEstimate est;
  StateVector v = dirac(seed);
  bool capped_ever = false;
  double previous = -1.0;
  for (int it = 1; it <= budget.max_iterations; ++it) {
    const StateVector w = op_apply(space, T, v);
    const double ratio = w.norm() / v.norm();
    const double rayleigh = ratio * ratio;
    est.iterations = it;
    est.lower_bound = ratio;
    est.cross_check = std::max(est.cross_check, ratio);
    est.witness = v;
    est.support_size = v.support_size();
    if (previous >= 0.0) {
      est.residual = std::abs(rayleigh - previous);
      if (est.residual < budget.residual_target) {
        est.converged = !capped_ever;
        break;
      }
    }
    previous = rayleigh;
    if (w.is_zero()) break;
    Trimmed next = normalize_and_trim(op_apply(space, T_adj, w), budget.prune_threshold,
                                      budget.support_cap);
    capped_ever = capped_ever || next.capped;
    if (next.vector.is_zero()) break;
    v = std::move(next.vector);
  }
  est.radius_hint = support_radius(space, seed, est.witness);
  return est;
}

}  // namespace

NormEstimate norm_lower_bound(const CayleySpace& space, const FormalOperator& T,
                              const NormBudget& budget) {
  if (T.is_zero()) {
    NormEstimate zero;
    zero.converged = true;
    return zero;
  }
  const FormalOperator T_adj = adjoint(space.group(), T);
  const Point seed = budget.seed_point.value_or(space.base_point());
  NormEstimate best = power_iteration(space, T, T_adj, seed, budget);
  if (budget.restarts > 0) {
    std::mt19937_64 rng(budget.seed);
    const auto ball = space.enumerate_ball(seed, 2);
    std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
    for (int r = 0; r < budget.restarts; ++r) {
      NormEstimate e = power_iteration(space, T, T_adj, ball[pick(rng)], budget);
      if (e.lower_bound > best.lower_bound) best = std::move(e);
    }
  }
  return best;
}

}  // namespace actionalg
