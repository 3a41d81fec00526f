#include "actionalg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace actionalg {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFalsified:
      return "FALSIFIED";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::kFalsified || b == Verdict::kFalsified) return Verdict::kFalsified;
  if (a == Verdict::kInconclusive || b == Verdict::kInconclusive) return Verdict::kInconclusive;
  return Verdict::kPass;
}

double CoefficientSequence::l2_norm() const {
  double sum = 0.0;
  for (const auto& [j, a] : entries) sum += std::norm(a);
  return std::sqrt(sum);
}

CoefficientSequence CoefficientSequence::uniform(int J) {
  if (J < 1) throw DegenerateInput("J must be >= 1");
  CoefficientSequence a;
  for (int j = 1; j <= J; ++j) a.entries.emplace(j, 1.0 / J);
  return a;
}

FormalOperator build_Ta(const Group& group, const GroupElement& h, const GroupElement& g,
                        const CoefficientSequence& a) {
  group.check(h);
  group.check(g);
  if (h.is_identity()) throw DegenerateInput("h must be nontrivial");
  std::vector<FormalOperator::Term> terms;
  terms.reserve(a.entries.size());
  for (const auto& [j, coeff] : a.entries) {
    if (j < 1) throw DomainError("coefficient sequences are indexed by positive integers");
    terms.emplace_back(group.conjugate(h, group.power(g, j)), coeff);
  }
  return FormalOperator::from_terms(std::move(terms));
}

FormalOperator average_MJ(const Group& group, const FormalOperator& T, const GroupElement& g,
                          int J) {
  if (J < 1) throw DegenerateInput("J must be >= 1");
  group.check(g);
  std::vector<FormalOperator::Term> terms;
  terms.reserve(T.support_size() * static_cast<std::size_t>(J));
  const GroupElement g_inv = group.invert(g);
  // the identity is fixed by conjugation: its coefficient is carried over
  // untouched instead of being re-summed J times
  const Complex a_e = T.coefficient(group.identity());
  if (a_e != Complex(0.0)) terms.emplace_back(group.identity(), a_e);
  for (const auto& [h, a] : T.terms()) {
    if (h.is_identity()) continue;
    GroupElement c = h;
    for (int j = 1; j <= J; ++j) {
      c = group.multiply(group.multiply(g_inv, c), g);
      terms.emplace_back(c, a / static_cast<double>(J));
    }
  }
  return FormalOperator::from_terms(std::move(terms));
}

Verdict row_verdict(const BoundRow& row) {
  if (row.falsified) return Verdict::kFalsified;
  return row.estimate.converged ? Verdict::kPass : Verdict::kInconclusive;
}

namespace {

BoundRow bound_row(const CayleySpace& space, const FormalOperator& op, int J, double bound,
                   const NormBudget& budget, double slack) {
  BoundRow row;
  row.J = J;
  row.bound = bound;
  row.estimate = norm_lower_bound(space, op, budget);
  row.falsified = row.estimate.lower_bound > bound + slack;
  return row;
}

}  // namespace

BoundRow panalytic_row(const CayleySpace& space, const GroupElement& h, const GroupElement& g,
                       int J, double C, const NormBudget& budget, double slack) {
  if (C <= 0) throw DomainError("constant C must be positive");
  const FormalOperator M = build_Ta(space.group(), h, g, CoefficientSequence::uniform(J));
  return bound_row(space, M, J, C / std::sqrt(static_cast<double>(J)), budget, slack);
}

PAnalyticReport verify_panalytic(const CayleySpace& space, const GroupElement& h,
                                 const GroupElement& g, int J_max, double C,
                                 const NormBudget& budget, double slack) {
  if (h.is_identity()) throw DegenerateInput("h must be nontrivial");
  if (J_max < 1) throw DomainError("J_max must be >= 1");
  PAnalyticReport report;
  report.h = h;
  report.g = g;
  report.constant_C = C;
  for (int J = 1; J <= J_max; ++J) {
    report.rows.push_back(panalytic_row(space, h, g, J, C, budget, slack));
    report.verdict = worst(report.verdict, row_verdict(report.rows.back()));
  }
  return report;
}

BlowupResult finite_order_blowup(const Group& group, const GroupElement& h, const GroupElement& g,
                                 int N) {
  if (h.is_identity()) throw DegenerateInput("h must be nontrivial");
  if (N < 1) throw DomainError("N must be >= 1");
  const auto m = group.order(g);
  if (!m) throw DomainError("g has infinite order; the blow-up needs a finite-order g");
  // count how many of the N conjugates land on each reduced element, then
  // scale once: multiplicity / sqrt(N) = sqrt(multiplicity^2 / N), which is
  // exactly sqrt(N) when all N coincide
  std::map<GroupElement, std::int64_t> multiplicity;
  for (std::int64_t k = 0; k < N; ++k) {
    ++multiplicity[group.conjugate(h, group.power(g, 1 + k * *m))];
  }
  std::vector<FormalOperator::Term> terms;
  for (const auto& [x, count] : multiplicity) {
    const double c = static_cast<double>(count);
    terms.emplace_back(x, std::sqrt(c * c / static_cast<double>(N)));
  }
  BlowupResult out;
  out.op = FormalOperator::from_terms(std::move(terms));
  // one unitary symbol: the norm is the modulus of its coefficient
  if (out.op.support_size() == 1) {
    out.norm = std::abs(out.op.terms().front().second);
  } else {
    throw DomainError("conjugates g^-(1+km) h g^(1+km) did not coincide");
  }
  return out;
}

Complex canonical_trace(const FormalOperator& T) { return T.coefficient(GroupElement{}); }

Complex trace_of_product(const Group& group, const FormalOperator& S, const FormalOperator& T) {
  std::vector<Complex> addends;
  for (const auto& [g, a] : S.terms()) {
    const Complex b = T.coefficient(group.invert(g));
    if (b != Complex(0.0)) addends.push_back(a * b);
  }
  std::sort(addends.begin(), addends.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  Complex sum{0.0, 0.0};
  for (const Complex& c : addends) sum += c;
  return sum;
}

bool tracial_property_check(const Group& group, const FormalOperator& S, const FormalOperator& T) {
  const bool commutes = trace_of_product(group, S, T) == trace_of_product(group, T, S);
  const Complex positive = trace_of_product(group, adjoint(group, S), S);
  return commutes && positive.imag() == 0.0 && positive.real() >= 0.0;
}

DecayRow averaging_decay_row(const CayleySpace& space, const FormalOperator& T,
                             const GroupElement& g, int J, double C, const NormBudget& budget,
                             double slack) {
  const Group& G = space.group();
  const Complex a_e = canonical_trace(T);
  double mass = 0.0;
  for (const auto& [h, a] : T.terms()) {
    if (!h.is_identity()) mass += std::abs(a);
  }
  DecayRow row;
  row.J = J;
  row.residual = average_MJ(G, T, g, J) - FormalOperator::single(G.identity(), a_e);
  row.residual_identity_coefficient = canonical_trace(row.residual);
  row.check = bound_row(space, row.residual, J, C / std::sqrt(static_cast<double>(J)) * mass,
                        budget, slack);
  return row;
}

DecayReport averaging_decay_report(const CayleySpace& space, const FormalOperator& T,
                                   const GroupElement& g, const std::vector<int>& J_list,
                                   double C, const NormBudget& budget, double slack) {
  DecayReport report;
  report.identity_coefficient = canonical_trace(T);
  for (const auto& [h, a] : T.terms()) {
    if (!h.is_identity()) report.coefficient_mass += std::abs(a);
  }
  for (int J : J_list) {
    report.rows.push_back(averaging_decay_row(space, T, g, J, C, budget, slack));
    const DecayRow& row = report.rows.back();
    Verdict v = row_verdict(row.check);
    if (row.residual_identity_coefficient != Complex(0.0)) v = Verdict::kFalsified;
    report.verdict = worst(report.verdict, v);
  }
  return report;
}

std::optional<int> closing_index(double C, double mass, double pivot_modulus, int J_max) {
  // (C/sqrt J) mass < |a_k|/2  <=>  (2 C mass)^2 < |a_k|^2 J
  const double lhs = (2.0 * C * mass) * (2.0 * C * mass);
  const double scale = pivot_modulus * pivot_modulus;
  for (int J = 1; J <= J_max; ++J) {
    if (lhs < scale * static_cast<double>(J)) return J;
  }
  return std::nullopt;
}

IdealExperimentReport ideal_experiment(const CayleySpace& space, const FormalOperator& T,
                                       const GroupElement& k, const GroupElement& g, int J_max,
                                       const std::vector<int>& numeric_J, double C,
                                       const NormBudget& budget, double slack) {
  const Group& G = space.group();
  IdealExperimentReport report;
  report.T = T;
  report.k = k;
  report.g = g;
  report.constant_C = C;
  report.a_k = T.coefficient(k);
  if (report.a_k == Complex(0.0)) {
    throw DomainError("pivot k = " + G.render(k) + " has zero coefficient in T");
  }
  report.T0 = left_translate(G, G.invert(k), T);
  for (const auto& [h, a] : report.T0.terms()) {
    if (!h.is_identity()) report.coefficient_mass += std::abs(a);
  }
  const double pivot = std::abs(report.a_k);
  report.closing_J = closing_index(C, report.coefficient_mass, pivot, J_max);
  if (!report.closing_J) report.verdict = Verdict::kInconclusive;
  if (canonical_trace(report.T0) != report.a_k) report.verdict = Verdict::kFalsified;

  for (int J = 1; J <= J_max; ++J) {
    IdealRow row;
    row.J = J;
    row.identity_coefficient = canonical_trace(average_MJ(G, report.T0, g, J));
    row.bound = C / std::sqrt(static_cast<double>(J)) * report.coefficient_mass;
    row.threshold = pivot / 2.0;
    if (row.identity_coefficient != report.a_k) report.verdict = Verdict::kFalsified;
    if (std::find(numeric_J.begin(), numeric_J.end(), J) != numeric_J.end()) {
      row.residual = averaging_decay_row(space, report.T0, g, J, C, budget, slack);
      report.verdict = worst(report.verdict, row_verdict(row.residual->check));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

Factor abstract_factor(const Group& ambient, const GroupElement& x, const char* name) {
  if (x.is_identity()) {
    throw DegenerateInput(std::string(name) + " must be nontrivial");
  }
  const auto m = ambient.order(x);
  return Factor{name, m.value_or(kInfiniteOrder)};
}

}  // namespace

FreeProductProbe::FreeProductProbe(const Group& ambient, const GroupElement& h,
                                   const GroupElement& g)
    : ambient_(&ambient),
      h_(h),
      g_(g),
      abstract_(Presentation({abstract_factor(ambient, h, "h"), abstract_factor(ambient, g, "g")})) {
  ambient.check(h);
  ambient.check(g);
}

GroupElement FreeProductProbe::evaluate(const GroupElement& word) const {
  GroupElement out;
  for (const Syllable& s : word.syllables()) {
    out = ambient_->multiply(out, ambient_->power(s.factor == kHFactor ? h_ : g_, s.exponent));
  }
  return out;
}

std::vector<GroupElement> FreeProductProbe::words(int max_length, std::size_t cap) const {
  return CayleySpace(abstract_, cap).enumerate_ball(abstract_.identity(), max_length);
}

DisjointnessReport check_Wj_disjoint(const CayleySpace& space, const GroupElement& h,
                                     const GroupElement& g, int J, int L, const Point& x_i,
                                     std::size_t max_recorded) {
  if (J < 1 || L < 1) throw DomainError("check_Wj_disjoint needs J >= 1 and L >= 1");
  const Group& G = space.group();
  G.check(x_i);
  const FreeProductProbe probe(G, h, g);
  const Group& A = probe.abstract();

  std::vector<GroupElement> w0;
  std::vector<GroupElement> w0_images;
  for (GroupElement& w : probe.words(L, space.ball_cap())) {
    if (!A.first_syllable_in(w, FreeProductProbe::kGFactor)) {
      w0_images.push_back(probe.evaluate(w));
      w0.push_back(std::move(w));
    }
  }
  DisjointnessReport report;
  report.w0_words = w0.size();

  struct Owner {
    int j;
    std::size_t word;
  };
  std::unordered_map<Point, Owner, GroupElementHash> owner;
  for (int j = -J; j <= J; ++j) {
    const GroupElement gj = G.power(g, j);
    for (std::size_t i = 0; i < w0.size(); ++i) {
      Point p = space.apply(G.multiply(gj, w0_images[i]), x_i);
      auto [it, inserted] = owner.emplace(p, Owner{j, i});
      if (inserted || it->second.j == j) continue;
      ++report.collision_count;
      ++report.collisions_by_index[j];
      ++report.collisions_by_index[it->second.j];
      if (report.collisions.size() < max_recorded) {
        const Owner& o = it->second;
        Collision c;
        c.j = j;
        c.u = w0[i];
        c.k = o.j;
        c.v = w0[o.word];
        c.point = std::move(p);
        c.stabilizer_word = A.multiply(
            A.multiply(A.invert(c.v), A.generator(FreeProductProbe::kGFactor, j - o.j)), c.u);
        report.collisions.push_back(std::move(c));
      }
    }
  }
  return report;
}

PingPongReport pingpong_certificate(const CayleySpace& space, const GroupElement& h,
                                    const GroupElement& g, int L, int J, int R, double c_min) {
  if (L < 1 || J < 1 || R < 0 || !(c_min > 0)) {
    throw DomainError("pingpong budgets must be positive");
  }
  const Group& G = space.group();
  const FreeProductProbe probe(G, h, g);
  const auto ball = space.enumerate_ball(space.base_point(), R);
  PingPongReport report;
  report.c_min = c_min;

  for (const GroupElement& w : probe.words(L, space.ball_cap())) {
    if (w.is_identity()) continue;
    const GroupElement image = probe.evaluate(w);
    ++report.injectivity_words;
    const bool moves_some = std::any_of(ball.begin(), ball.end(),
                                        [&](const Point& x) { return space.apply(image, x) != x; });
    if (!moves_some) report.injectivity_violations.push_back(w);

    const bool has_g = std::any_of(w.syllables().begin(), w.syllables().end(), [](const Syllable& s) {
      return s.factor == FreeProductProbe::kGFactor;
    });
    if (has_g) {
      ++report.ellipticity_words;
      const bool moves_all = std::all_of(ball.begin(), ball.end(), [&](const Point& x) {
        return space.distance(x, space.apply(image, x)) >= 1;
      });
      if (!moves_all) report.ellipticity_violations.push_back(w);
    }
  }

  report.disjointness = check_Wj_disjoint(space, h, g, J, L, space.base_point());

  const Point x0 = space.base_point();
  Point y = x0;
  for (int n = 1; n <= J; ++n) {
    y = space.apply(g, y);
    const std::int64_t d = space.distance(x0, y);
    report.displacements.push_back(d);
    if (static_cast<double>(d) < c_min * n) report.displacement_ok = false;
  }

  const bool pass = report.injectivity_violations.empty() && report.disjointness.disjoint() &&
                    report.ellipticity_violations.empty() && report.displacement_ok;
  report.verdict = pass ? Verdict::kPass : Verdict::kFalsified;
  return report;
}

LoxodromicReport loxodromic_probe(const CayleySpace& space, const GroupElement& g1,
                                  const GroupElement& g2, int l, int k, int n_max, double c_min) {
  if (l < 1 || k < 1 || n_max < 1) throw DomainError("l, k and n_max must be >= 1");
  const Group& G = space.group();
  LoxodromicReport report;
  report.w = G.multiply(G.power(g1, l), G.power(g2, k));
  report.pass = true;
  const Point x0 = space.base_point();
  Point y = x0;
  for (int n = 1; n <= n_max; ++n) {
    y = space.apply(report.w, y);
    const std::int64_t d = space.distance(x0, y);
    report.displacements.push_back(d);
    if (static_cast<double>(d) < c_min * n) report.pass = false;
  }
  report.growth_rate = static_cast<double>(report.displacements.back()) / n_max;
  return report;
}

}  // namespace actionalg
