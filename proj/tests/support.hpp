#pragma once

// Shared fixtures for the unit tests: the surrogate groups, seeded random
// words/vectors/operators, and conversion into the oracle's string words.

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "actionalg/groups.hpp"
#include "actionalg/operators.hpp"
#include "actionalg/spaces.hpp"
#include "oracle/naive_words.hpp"

namespace testing {

using namespace actionalg;

inline Group free2() { return Group(Presentation::free_group({"a", "b"})); }
inline Group z2_z3() { return Group(Presentation({{"s", 2}, {"t", 3}})); }
inline Group z3_z() { return Group(Presentation({{"h", 3}, {"g", kInfiniteOrder}})); }

inline oracle::NaiveGroup naive_of(const Group& G) {
  std::map<char, int> orders;
  for (const Factor& f : G.presentation().factors()) {
    orders[f.name.at(0)] = static_cast<int>(f.order);
  }
  return oracle::NaiveGroup(orders);
}

/// Letter string of a reduced element; single-letter generator names only.
inline std::string to_naive(const Group& G, const GroupElement& x) {
  std::string out;
  for (const Syllable& s : x.syllables()) {
    const char c = G.presentation().factor(static_cast<std::size_t>(s.factor)).name.at(0);
    const char letter = s.exponent > 0 ? c : oracle::NaiveGroup::inverse_letter(c);
    out.append(static_cast<std::size_t>(s.exponent > 0 ? s.exponent : -s.exponent), letter);
  }
  return out;
}

/// Same raw word spelled out as letters (unreduced).
inline std::string raw_to_naive(const Group& G, const std::vector<Syllable>& raw) {
  std::string out;
  for (const Syllable& s : raw) {
    const char c = G.presentation().factor(static_cast<std::size_t>(s.factor)).name.at(0);
    const char letter = s.exponent > 0 ? c : oracle::NaiveGroup::inverse_letter(c);
    out.append(static_cast<std::size_t>(s.exponent > 0 ? s.exponent : -s.exponent), letter);
  }
  return out;
}

inline std::vector<Syllable> random_raw(const Group& G, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> fac(0, static_cast<int>(G.presentation().size()) - 1);
  std::uniform_int_distribution<int> ex(-4, 4);
  std::vector<Syllable> raw;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    int e = 0;
    while (e == 0) e = ex(rng);
    raw.push_back({fac(rng), e});
  }
  return raw;
}

inline GroupElement random_element(const Group& G, std::mt19937_64& rng, int max_len = 8) {
  return G.reduce(random_raw(G, rng, max_len));
}

inline Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

inline StateVector random_vector(const Group& G, std::mt19937_64& rng, int support = 6) {
  std::vector<StateVector::Term> t;
  for (int i = 0; i < support; ++i) t.emplace_back(random_element(G, rng, 5), random_complex(rng));
  return StateVector::from_terms(std::move(t));
}

inline FormalOperator random_op(const Group& G, std::mt19937_64& rng, int support = 4) {
  std::vector<FormalOperator::Term> t;
  for (int i = 0; i < support; ++i) t.emplace_back(random_element(G, rng, 4), random_complex(rng));
  return FormalOperator::from_terms(std::move(t));
}

}  // namespace testing
