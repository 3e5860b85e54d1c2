#include "grope/group_word.hpp"

#include <algorithm>

#include "grope/errors.hpp"

namespace grope {

GroupWord GroupWord::gen(unsigned index, bool inverted) {
  if (index >= 26) throw ParseError("generator index out of range: " + std::to_string(index));
  return GroupWord{{Generator{static_cast<std::uint8_t>(index), inverted}}};
}

GroupWord GroupWord::parse(std::string_view text) {
  std::vector<Generator> letters;
  bool saw_identity = false;
  std::size_t i = 0;
  bool any_token = false;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    any_token = true;
    const char c = text[i];
    if (c == '1') {
      saw_identity = true;
      ++i;
    } else if (c >= 'a' && c <= 'z') {
      Generator g{static_cast<std::uint8_t>(c - 'a'), false};
      ++i;
      if (i < text.size() && text[i] == '\'') {
        g.inverted = true;
        ++i;
      }
      letters.push_back(g);
    } else {
      throw ParseError(std::string("unexpected character in word: '") + c + "'");
    }
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
      throw ParseError("letters must be whitespace-separated: " + std::string(text));
  }
  if (!any_token) throw ParseError("empty word; the identity is written \"1\"");
  if (saw_identity) {
    if (!letters.empty()) throw ParseError("\"1\" cannot be mixed with letters: " + std::string(text));
    return identity();
  }
  return GroupWord{std::move(letters)};
}

std::string GroupWord::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ' ';
    out += static_cast<char>('a' + letters_[i].index);
    if (letters_[i].inverted) out += '\'';
  }
  return out;
}

bool GroupWord::is_reduced() const {
  for (std::size_t i = 0; i + 1 < letters_.size(); ++i)
    if (letters_[i].index == letters_[i + 1].index && letters_[i].inverted != letters_[i + 1].inverted)
      return false;
  return true;
}

unsigned GroupWord::min_generator_count() const {
  unsigned count = 0;
  for (const Generator& g : letters_) count = std::max(count, static_cast<unsigned>(g.index) + 1);
  return count;
}

bool operator<(const GroupWord& a, const GroupWord& b) {
  if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
  return std::lexicographical_compare(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                      b.letters_.end());
}

GroupWord reduce(const GroupWord& w) {
  std::vector<Generator> stack;
  stack.reserve(w.size());
  for (const Generator& g : w.letters()) {
    if (!stack.empty() && stack.back().index == g.index && stack.back().inverted != g.inverted)
      stack.pop_back();
    else
      stack.push_back(g);
  }
  return GroupWord{std::move(stack)};
}

GroupWord invert(const GroupWord& w) {
  std::vector<Generator> letters(w.letters().rbegin(), w.letters().rend());
  for (Generator& g : letters) g.inverted = !g.inverted;
  return GroupWord{std::move(letters)};
}

GroupWord multiply(const GroupWord& a, const GroupWord& b) {
  std::vector<Generator> joined = a.letters();
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return reduce(GroupWord{std::move(joined)});
}

GroupWord normalize(const GroupWord& w) {
  GroupWord r = reduce(w);
  GroupWord inv = invert(r);
  return inv < r ? inv : r;
}

}  // namespace grope
