#pragma once

// Verification engines: conjugate sums T_a, the averaging map M_J and its
// C/sqrt(J) decay, the ideal experiment, the canonical trace, the
// finite-order counterexample, W_j orbit disjointness and ping-pong
// certificates. All checks are budgeted and falsification-style.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "actionalg/groups.hpp"
#include "actionalg/operators.hpp"
#include "actionalg/spaces.hpp"

namespace actionalg {

inline constexpr double kDefaultConstant = 2.0;
inline constexpr double kDefaultSlack = 1e-9;

enum class Verdict { kPass, kFalsified, kInconclusive };

std::string_view to_string(Verdict v);

/// FALSIFIED dominates INCONCLUSIVE dominates PASS.
Verdict worst(Verdict a, Verdict b);

/// Finitely supported sequence j -> a_j over positive integers.
struct CoefficientSequence {
  std::map<int, Complex> entries;

  double l2_norm() const;

  /// a_j = 1/J for 1 <= j <= J.
  static CoefficientSequence uniform(int J);
};

/// sum_j a_j (g^-j h g^j); coefficients of coinciding conjugates add.
FormalOperator build_Ta(const Group& group, const GroupElement& h, const GroupElement& g,
                        const CoefficientSequence& a);

/// (1/J) sum_{j=1..J} g^-j T g^j, merged after reduction.
FormalOperator average_MJ(const Group& group, const FormalOperator& T, const GroupElement& g,
                          int J);

struct BoundRow {
  int J = 0;
  NormEstimate estimate;
  double bound = 0.0;
  bool falsified = false;
};

/// Row verdict: FALSIFIED if the lower bound beats the bound, else PASS if the
/// estimate converged, else INCONCLUSIVE.
Verdict row_verdict(const BoundRow& row);

struct PAnalyticReport {
  GroupElement h;
  GroupElement g;
  double constant_C = kDefaultConstant;
  std::vector<BoundRow> rows;
  Verdict verdict = Verdict::kPass;
};

/// One row of verify_panalytic: ||M_J(pi(h))|| against C/sqrt(J).
BoundRow panalytic_row(const CayleySpace& space, const GroupElement& h, const GroupElement& g,
                       int J, double C, const NormBudget& budget, double slack = kDefaultSlack);

PAnalyticReport verify_panalytic(const CayleySpace& space, const GroupElement& h,
                                 const GroupElement& g, int J_max, double C = kDefaultConstant,
                                 const NormBudget& budget = {}, double slack = kDefaultSlack);

struct BlowupResult {
  FormalOperator op;
  double norm = 0.0;
};

/// sum_{k<N} N^-1/2 g^-(1+km) h g^(1+km) = sqrt(N) g^-1 h g for g of order m.
BlowupResult finite_order_blowup(const Group& group, const GroupElement& h, const GroupElement& g,
                                 int N);

/// Coefficient at the identity.
Complex canonical_trace(const FormalOperator& T);

/// sigma(ST) = sum_{gh=e} a_g b_h, added in a canonical order so that sigma(ST)
/// and sigma(TS) sum the same addends in the same sequence.
Complex trace_of_product(const Group& group, const FormalOperator& S, const FormalOperator& T);

/// sigma(ST) == sigma(TS) exactly and sigma(S*S) real and >= 0.
bool tracial_property_check(const Group& group, const FormalOperator& S, const FormalOperator& T);

struct DecayRow {
  int J = 0;
  FormalOperator residual;
  /// Coefficient of e in the residual (exactly zero when the identity part is preserved).
  Complex residual_identity_coefficient;
  BoundRow check;
};

struct DecayReport {
  Complex identity_coefficient;
  /// sum_{h in F} |a_h|
  double coefficient_mass = 0.0;
  std::vector<DecayRow> rows;
  Verdict verdict = Verdict::kPass;
};

/// R_J = M_J(T) - a_e e, estimated against (C/sqrt(J)) sum_{h in F} |a_h|.
DecayRow averaging_decay_row(const CayleySpace& space, const FormalOperator& T,
                             const GroupElement& g, int J, double C, const NormBudget& budget,
                             double slack = kDefaultSlack);

DecayReport averaging_decay_report(const CayleySpace& space, const FormalOperator& T,
                                   const GroupElement& g, const std::vector<int>& J_list,
                                   double C = kDefaultConstant, const NormBudget& budget = {},
                                   double slack = kDefaultSlack);

struct IdealRow {
  int J = 0;
  Complex identity_coefficient;
  double bound = 0.0;
  double threshold = 0.0;
  /// Present only for J in the numeric list.
  std::optional<DecayRow> residual;
};

struct IdealExperimentReport {
  FormalOperator T;
  FormalOperator T0;
  GroupElement k;
  Complex a_k;
  GroupElement g;
  double constant_C = kDefaultConstant;
  double coefficient_mass = 0.0;
  /// Least J with (C/sqrt J) sum|a_h| < |a_k|/2.
  std::optional<int> closing_J;
  std::vector<IdealRow> rows;
  Verdict verdict = Verdict::kPass;
};

/// Least J >= 1 with (C/sqrt J) * mass < |a_k|/2, compared in squared form
/// (2 C mass)^2 < |a_k|^2 J so no square root is rounded; nullopt past J_max.
std::optional<int> closing_index(double C, double mass, double pivot_modulus, int J_max);

IdealExperimentReport ideal_experiment(const CayleySpace& space, const FormalOperator& T,
                                       const GroupElement& k, const GroupElement& g, int J_max,
                                       const std::vector<int>& numeric_J,
                                       double C = kDefaultConstant, const NormBudget& budget = {},
                                       double slack = kDefaultSlack);

/// Abstract free product <h> * <g> with its evaluation into the ambient group.
class FreeProductProbe {
 public:
  FreeProductProbe(const Group& ambient, const GroupElement& h, const GroupElement& g);

  const Group& abstract() const { return abstract_; }
  static constexpr int kHFactor = 0;
  static constexpr int kGFactor = 1;

  GroupElement evaluate(const GroupElement& word) const;
  /// Reduced words of abstract length <= max_length, breadth-first.
  std::vector<GroupElement> words(int max_length, std::size_t cap) const;

 private:
  const Group* ambient_;
  GroupElement h_;
  GroupElement g_;
  Group abstract_;
};

struct Collision {
  int j = 0;
  GroupElement u;
  int k = 0;
  GroupElement v;
  Point point;
  /// v^-1 g^(j-k) u in the abstract free product; its image fixes x_i.
  GroupElement stabilizer_word;
};

struct DisjointnessReport {
  std::size_t w0_words = 0;
  std::size_t collision_count = 0;
  /// Collisions involving W_j, keyed by j (each collision counts at both ends).
  std::map<int, std::size_t> collisions_by_index;
  /// First collisions found, in ascending (j, word) order.
  std::vector<Collision> collisions;
  bool disjoint() const { return collision_count == 0; }
};

/// Checks that the sets W_j . x_i, |j| <= J, are pairwise disjoint over
/// W_0-words of abstract length <= L.
DisjointnessReport check_Wj_disjoint(const CayleySpace& space, const GroupElement& h,
                                     const GroupElement& g, int J, int L, const Point& x_i,
                                     std::size_t max_recorded = 64);

struct PingPongReport {
  std::size_t injectivity_words = 0;
  std::vector<GroupElement> injectivity_violations;
  DisjointnessReport disjointness;
  std::size_t ellipticity_words = 0;
  std::vector<GroupElement> ellipticity_violations;
  std::vector<std::int64_t> displacements;
  double c_min = 0.0;
  bool displacement_ok = true;
  Verdict verdict = Verdict::kPass;
};

PingPongReport pingpong_certificate(const CayleySpace& space, const GroupElement& h,
                                    const GroupElement& g, int L, int J, int R, double c_min);

struct LoxodromicReport {
  GroupElement w;
  std::vector<std::int64_t> displacements;
  double growth_rate = 0.0;
  bool pass = false;
};

/// Displacement growth of w = g1^l g2^k from the base point.
LoxodromicReport loxodromic_probe(const CayleySpace& space, const GroupElement& g1,
                                  const GroupElement& g2, int l, int k, int n_max, double c_min);

}  // namespace actionalg
