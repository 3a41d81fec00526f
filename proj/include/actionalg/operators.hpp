#pragma once

// Finitely supported vectors in l2(X), formal operators in CG, their exact
// application, and lower-bound operator-norm estimation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "actionalg/groups.hpp"
#include "actionalg/spaces.hpp"

namespace actionalg {

using Complex = std::complex<double>;

struct PointTag {};
struct GroupTag {};

/// Finitely supported function GroupElement -> Scalar, kept sorted by key
/// with no stored zeros. Tag separates l2(X) vectors from CG elements.
template <class Tag, class Scalar = Complex>
class Combination {
 public:
  using Term = std::pair<GroupElement, Scalar>;

  Combination() = default;

  /// Sorts by key, sums repeated keys in input order and drops zeros.
  static Combination from_terms(std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.first < b.first; });
    Combination out;
    out.terms_.reserve(terms.size());
    for (Term& t : terms) {
      if (!out.terms_.empty() && out.terms_.back().first == t.first) {
        out.terms_.back().second += t.second;
      } else {
        if (!out.terms_.empty() && out.terms_.back().second == Scalar(0)) out.terms_.pop_back();
        out.terms_.push_back(std::move(t));
      }
    }
    if (!out.terms_.empty() && out.terms_.back().second == Scalar(0)) out.terms_.pop_back();
    return out;
  }

  static Combination single(GroupElement key, Scalar value = Scalar(1)) {
    std::vector<Term> t;
    t.emplace_back(std::move(key), value);
    return from_terms(std::move(t));
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coefficient(const GroupElement& key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, const GroupElement& k) { return t.first < k; });
    return it != terms_.end() && it->first == key ? it->second : Scalar(0);
  }

  /// l2 norm, scaled two-pass so tiny or huge coefficients do not under/overflow.
  double norm() const {
    double scale = 0.0;
    for (const Term& t : terms_) scale = std::max(scale, std::abs(t.second));
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (const Term& t : terms_) {
      const double r = std::abs(t.second) / scale;
      sum += r * r;
    }
    return scale * std::sqrt(sum);
  }

  double l1_norm() const {
    double sum = 0.0;
    for (const Term& t : terms_) sum += std::abs(t.second);
    return sum;
  }

  friend Combination operator+(const Combination& x, const Combination& y) {
    std::vector<Term> t = x.terms_;
    t.insert(t.end(), y.terms_.begin(), y.terms_.end());
    return from_terms(std::move(t));
  }
  friend Combination operator-(const Combination& x, const Combination& y) {
    return x + Scalar(-1) * y;
  }
  friend Combination operator*(Scalar c, const Combination& x) {
    std::vector<Term> t = x.terms_;
    for (Term& term : t) term.second *= c;
    return from_terms(std::move(t));
  }

  friend bool operator==(const Combination&, const Combination&) = default;

 private:
  std::vector<Term> terms_;
};

/// Vector in l2(X) with finite support.
using StateVector = Combination<PointTag>;
/// Element sum a_g g of CG, acting as sum a_g pi(g).
using FormalOperator = Combination<GroupTag>;

/// <v, w>, linear in the first argument.
Complex inner(const StateVector& v, const StateVector& w);

StateVector dirac(const Point& x);

/// (pi(g) v)(x) = v(g^-1 x).
StateVector pi_apply(const CayleySpace& space, const GroupElement& g, const StateVector& v);

/// Exact sum_g a_g pi(g) v, no truncation.
StateVector op_apply(const CayleySpace& space, const FormalOperator& T, const StateVector& v);

/// Coefficient at g^-1 is conj(a_g).
FormalOperator adjoint(const Group& group, const FormalOperator& T);

/// Convolution product in CG.
FormalOperator product(const Group& group, const FormalOperator& S, const FormalOperator& T);

/// Left translation x . T (every symbol h becomes xh).
FormalOperator left_translate(const Group& group, const GroupElement& x, const FormalOperator& T);

/// Symbol-by-symbol conjugation h -> by^-1 h by.
FormalOperator conjugate_by(const Group& group, const FormalOperator& T, const GroupElement& by);

StateVector indicator_project(const StateVector& v, const std::function<bool(const Point&)>& member);

/// sum |a_g|, an upper bound for the operator norm of T.
double triangle_upper_bound(const FormalOperator& T);

struct NormBudget {
  int max_iterations = 200;
  std::size_t support_cap = 400'000;
  /// Relative to the current vector norm. Pruned iterates are still explicit
  /// vectors, so pruning only costs tightness.
  double prune_threshold = 1e-3;
  /// Convergence target on successive Rayleigh quotients of T*T.
  double residual_target = 1e-5;
  std::optional<Point> seed_point;
  /// Extra starts from random Dirac vectors in a small ball, reproducible from seed.
  int restarts = 0;
  std::uint64_t seed = 0;
};

struct NormEstimate {
  double lower_bound = 0.0;
  /// Largest ||T v|| / ||v|| seen over all iterates.
  double cross_check = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::size_t support_size = 0;
  int radius_hint = 0;
  bool converged = false;
  /// Unit vector with ||T witness|| = lower_bound.
  StateVector witness;
};

/// Power iteration on T*T from a Dirac vector. Every reported value is
/// attained by an explicit vector, so lower_bound <= ||T||.
NormEstimate norm_lower_bound(const CayleySpace& space, const FormalOperator& T,
                              const NormBudget& budget = {});

}  // namespace actionalg
