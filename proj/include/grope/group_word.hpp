#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace grope {

/// One letter of a word: a generator index plus an inverse mark.
struct Generator {
  std::uint8_t index = 0;
  bool inverted = false;

  friend bool operator==(const Generator&, const Generator&) = default;
  friend bool operator<(const Generator& a, const Generator& b) {
    return a.index != b.index ? a.index < b.index : a.inverted < b.inverted;
  }
};

/// A word over free-group generators a..z.  A GroupWord is a plain letter
/// sequence; reduce() cancels adjacent inverse pairs, and multiply()/invert()
/// always return reduced results.  Words compare in shortlex order.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Generator> letters) : letters_(std::move(letters)) {}

  static GroupWord identity() { return GroupWord{}; }
  static GroupWord gen(unsigned index, bool inverted = false);

  /// Parses the textual syntax: whitespace-separated letters a..z, each with
  /// an optional trailing ' marking an inverse; the bare word "1" is the
  /// identity.  Throws ParseError on anything else.
  static GroupWord parse(std::string_view text);
  std::string str() const;

  bool is_identity() const { return letters_.empty(); }
  bool is_reduced() const;
  std::size_t size() const { return letters_.size(); }
  const std::vector<Generator>& letters() const { return letters_; }

  /// Smallest generator count that makes this word well formed (highest
  /// index + 1), zero for the identity.
  unsigned min_generator_count() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  friend bool operator<(const GroupWord& a, const GroupWord& b);

 private:
  std::vector<Generator> letters_;
};

/// Free reduction: repeatedly cancels adjacent x x' pairs.
GroupWord reduce(const GroupWord& w);

/// Reversed word with every inverse mark flipped (reduced input stays reduced).
GroupWord invert(const GroupWord& w);

/// Reduced concatenation a . b.
GroupWord multiply(const GroupWord& a, const GroupWord& b);

/// Canonical representative of {w, w^-1}: the shortlex-smaller of the two
/// reduced forms.  Used wherever labels are compared up to inversion.
GroupWord normalize(const GroupWord& w);

}  // namespace grope
