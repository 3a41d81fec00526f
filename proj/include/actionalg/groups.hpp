#pragma once

// Free products of cyclic groups: presentations, reduced normal forms and the
// group law. Everything else in the library is built on these word values.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actionalg/errors.hpp"

namespace actionalg {

/// Marker for an infinite cyclic factor.
inline constexpr std::int64_t kInfiniteOrder = 0;

struct Factor {
  std::string name;
  std::int64_t order = kInfiniteOrder;

  bool is_finite() const { return order != kInfiniteOrder; }
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Free product of cyclic groups, F_k being k infinite factors.
/// Equality is structural (orders and names).
class Presentation {
 public:
  explicit Presentation(std::vector<Factor> factors);

  static Presentation free_group(const std::vector<std::string>& names);

  std::size_t size() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }
  std::optional<int> index_of(std::string_view name) const;

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  std::vector<Factor> factors_;
};

struct Syllable {
  int factor = 0;
  std::int64_t exponent = 0;

  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Reduced word; the empty word is the identity. Values are only produced
/// reduced by Group, so equality of elements is equality of syllable lists.
class GroupElement {
 public:
  GroupElement() = default;

  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::size_t syllable_count() const { return syllables_.size(); }
  bool is_identity() const { return syllables_.empty(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement& x, const GroupElement& y) {
    return x.syllables_ <=> y.syllables_;
  }

 private:
  friend class Group;
  explicit GroupElement(std::vector<Syllable> s) : syllables_(std::move(s)) {}

  std::vector<Syllable> syllables_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& x) const noexcept;
};

/// Group law, normal forms and text format for one presentation.
class Group {
 public:
  explicit Group(Presentation presentation);

  const Presentation& presentation() const { return presentation_; }

  GroupElement identity() const { return {}; }
  GroupElement generator(int factor, std::int64_t exponent = 1) const;

  /// Unique reduced normal form of an arbitrary syllable sequence.
  GroupElement reduce(std::span<const Syllable> raw_word) const;

  GroupElement multiply(const GroupElement& x, const GroupElement& y) const;
  GroupElement invert(const GroupElement& x) const;
  GroupElement power(const GroupElement& x, std::int64_t n) const;
  GroupElement conjugate(const GroupElement& x, const GroupElement& by) const;

  /// c_j = g^-j h g^j for j = 1..count.
  std::vector<GroupElement> conjugate_sequence(const GroupElement& g, const GroupElement& h,
                                               int count) const;

  /// True iff x != e and the first syllable of x lies in the given factor.
  bool first_syllable_in(const GroupElement& x, int factor) const;

  /// Cayley-graph word length for the generating set {factor generators}.
  std::int64_t word_length(const GroupElement& x) const;

  /// Element order; nullopt for infinite order.
  std::optional<std::int64_t> order(const GroupElement& x) const;

  /// Throws PresentationMismatch unless x is a reduced word of this presentation.
  void check(const GroupElement& x) const;

  std::string render(const GroupElement& x) const;
  GroupElement parse(std::string_view text) const;

  friend bool operator==(const Group& a, const Group& b) {
    return a.presentation_ == b.presentation_;
  }

 private:
  std::int64_t canonical_exponent(int factor, std::int64_t exponent) const;
  void append(std::vector<Syllable>& word, Syllable s) const;

  Presentation presentation_;
};

}  // namespace actionalg
