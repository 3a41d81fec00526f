#include "actionalg/groups.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <numeric>

namespace actionalg {

Presentation::Presentation(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("presentation needs at least one factor");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor& f = factors_[i];
    if (f.order < 0 || f.order == 1) {
      throw DomainError("factor '" + f.name + "': finite orders must be >= 2");
    }
    if (f.name.empty() || f.name == "e") {
      throw DomainError("generator names must be nonempty and differ from 'e'");
    }
    if (!std::isalpha(static_cast<unsigned char>(f.name.front())) ||
        !std::all_of(f.name.begin(), f.name.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        })) {
      throw DomainError("generator name '" + f.name + "' is not an identifier");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (factors_[j].name == f.name) throw DomainError("duplicate generator name " + f.name);
    }
  }
}

Presentation Presentation::free_group(const std::vector<std::string>& names) {
  std::vector<Factor> factors;
  factors.reserve(names.size());
  for (const auto& n : names) factors.push_back({n, kInfiniteOrder});
  return Presentation(std::move(factors));
}

std::optional<int> Presentation::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::size_t GroupElementHash::operator()(const GroupElement& x) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Syllable& s : x.syllables()) {
    h ^= static_cast<std::uint64_t>(s.factor) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(s.exponent) * 0xff51afd7ed558ccdULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Group::Group(Presentation presentation) : presentation_(std::move(presentation)) {}

std::int64_t Group::canonical_exponent(int factor, std::int64_t exponent) const {
  if (factor < 0 || static_cast<std::size_t>(factor) >= presentation_.size()) {
    throw PresentationMismatch("factor index " + std::to_string(factor) +
                               " outside presentation of size " +
                               std::to_string(presentation_.size()));
  }
  const std::int64_t m = presentation_.factor(factor).order;
  if (m == kInfiniteOrder) return exponent;
  const std::int64_t r = exponent % m;
  return r < 0 ? r + m : r;
}

void Group::append(std::vector<Syllable>& word, Syllable s) const {
  s.exponent = canonical_exponent(s.factor, s.exponent);
  if (s.exponent == 0) return;
  if (!word.empty() && word.back().factor == s.factor) {
    const std::int64_t merged = canonical_exponent(s.factor, word.back().exponent + s.exponent);
    if (merged == 0) {
      word.pop_back();
    } else {
      word.back().exponent = merged;
    }
    return;
  }
  word.push_back(s);
}

GroupElement Group::generator(int factor, std::int64_t exponent) const {
  const Syllable s{factor, exponent};
  return reduce(std::span<const Syllable>(&s, 1));
}

GroupElement Group::reduce(std::span<const Syllable> raw_word) const {
  std::vector<Syllable> word;
  word.reserve(raw_word.size());
  for (const Syllable& s : raw_word) append(word, s);
  return GroupElement(std::move(word));
}

void Group::check(const GroupElement& x) const {
  const auto& s = x.syllables();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].factor < 0 || static_cast<std::size_t>(s[i].factor) >= presentation_.size()) {
      throw PresentationMismatch("element uses factor index " + std::to_string(s[i].factor) +
                                 " outside the presentation");
    }
    const std::int64_t m = presentation_.factor(s[i].factor).order;
    if (s[i].exponent == 0 || (m != kInfiniteOrder && (s[i].exponent < 1 || s[i].exponent >= m))) {
      throw PresentationMismatch("element exponent not canonical for this presentation");
    }
    if (i > 0 && s[i - 1].factor == s[i].factor) {
      throw PresentationMismatch("element is not reduced for this presentation");
    }
  }
}

GroupElement Group::multiply(const GroupElement& x, const GroupElement& y) const {
  check(x);
  check(y);
  std::vector<Syllable> word;
  word.reserve(x.syllable_count() + y.syllable_count());
  word = x.syllables();
  for (const Syllable& s : y.syllables()) append(word, s);
  return GroupElement(std::move(word));
}

GroupElement Group::invert(const GroupElement& x) const {
  check(x);
  std::vector<Syllable> word;
  word.reserve(x.syllable_count());
  for (auto it = x.syllables().rbegin(); it != x.syllables().rend(); ++it) {
    word.push_back({it->factor, canonical_exponent(it->factor, -it->exponent)});
  }
  return GroupElement(std::move(word));
}

GroupElement Group::power(const GroupElement& x, std::int64_t n) const {
  GroupElement base = n < 0 ? invert(x) : x;
  std::int64_t k = n < 0 ? -n : n;
  GroupElement result;
  // square-and-multiply; words stay reduced throughout
  while (k > 0) {
    if (k & 1) result = multiply(result, base);
    k >>= 1;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

GroupElement Group::conjugate(const GroupElement& x, const GroupElement& by) const {
  return multiply(multiply(invert(by), x), by);
}

std::vector<GroupElement> Group::conjugate_sequence(const GroupElement& g, const GroupElement& h,
                                                    int count) const {
  check(g);
  check(h);
  if (h.is_identity()) throw DegenerateInput("h must be nontrivial");
  if (count < 1) throw DegenerateInput("conjugate count must be >= 1");
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(count));
  const GroupElement g_inv = invert(g);
  GroupElement c = h;
  for (int j = 1; j <= count; ++j) {
    c = multiply(multiply(g_inv, c), g);
    out.push_back(c);
  }
  return out;
}

bool Group::first_syllable_in(const GroupElement& x, int factor) const {
  check(x);
  if (factor < 0 || static_cast<std::size_t>(factor) >= presentation_.size()) {
    throw PresentationMismatch("factor index outside presentation");
  }
  return !x.is_identity() && x.syllables().front().factor == factor;
}

std::int64_t Group::word_length(const GroupElement& x) const {
  std::int64_t len = 0;
  for (const Syllable& s : x.syllables()) {
    const std::int64_t m = presentation_.factor(s.factor).order;
    len += m == kInfiniteOrder ? std::abs(s.exponent) : std::min(s.exponent, m - s.exponent);
  }
  return len;
}

std::optional<std::int64_t> Group::order(const GroupElement& x) const {
  check(x);
  GroupElement y = x;
  // cyclic reduction: conjugating by the first syllable merges it into the last
  while (y.syllable_count() >= 2 &&
         y.syllables().front().factor == y.syllables().back().factor) {
    const Syllable first = y.syllables().front();
    y = conjugate(y, generator(first.factor, first.exponent));
  }
  if (y.is_identity()) return 1;
  if (y.syllable_count() >= 2) return std::nullopt;
  const Syllable s = y.syllables().front();
  const std::int64_t m = presentation_.factor(s.factor).order;
  if (m == kInfiniteOrder) return std::nullopt;
  return m / std::gcd(m, s.exponent);
}

std::string Group::render(const GroupElement& x) const {
  if (x.is_identity()) return "e";
  std::string out;
  for (const Syllable& s : x.syllables()) {
    if (!out.empty()) out += ' ';
    out += presentation_.factor(s.factor).name;
    if (s.exponent != 1) {
      out += '^';
      out += std::to_string(s.exponent);
    }
  }
  return out;
}

GroupElement Group::parse(std::string_view text) const {
  std::vector<Syllable> raw;
  std::size_t pos = 0;
  const auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("cannot parse word '" + std::string(text) + "' at column " +
                      std::to_string(pos + 1) + ": " + why);
  };
  const auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (pos == text.size()) throw fail("empty word");
  while (true) {
    skip_space();
    if (pos == text.size()) break;
    // longest generator name that matches here; 'e' is the identity token
    std::size_t best_len = 0;
    int best = -1;
    for (std::size_t i = 0; i < presentation_.size(); ++i) {
      const std::string& n = presentation_.factor(i).name;
      if (n.size() > best_len && text.substr(pos, n.size()) == n) {
        best_len = n.size();
        best = static_cast<int>(i);
      }
    }
    const bool identity_token = best < 0 && text[pos] == 'e';
    if (best < 0 && !identity_token) throw fail("unknown generator");
    pos += identity_token ? 1 : best_len;
    std::int64_t exponent = 1;
    skip_space();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip_space();
      std::size_t start = pos;
      if (pos < text.size() && text[pos] == '+') start = ++pos;
      const char* first = text.data() + start;
      const char* last = text.data() + text.size();
      const auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc() || ptr == first) throw fail("malformed exponent");
      pos = static_cast<std::size_t>(ptr - text.data());
    }
    if (!identity_token) raw.push_back({best, exponent});
  }
  return reduce(raw);
}

}  // namespace actionalg
