#include <string>
#include <vector>

#include "doctest.h"
#include "grope/errors.hpp"
#include "grope/generators.hpp"
#include "grope/group_word.hpp"

namespace grope {
namespace {

/// Oracle for reduce: rescan from the start after every single cancellation
/// until no adjacent inverse pair is left.
std::vector<Generator> scan_and_delete(std::vector<Generator> xs) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (xs[i].index == xs[i + 1].index && xs[i].inverted != xs[i + 1].inverted) {
        xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i),
                 xs.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return xs;
}

std::vector<Generator> random_letters(Rng& rng, std::size_t count) {
  std::vector<Generator> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(Generator{static_cast<std::uint8_t>(rng.below(3)), rng.one_in(2)});
  return out;
}

TEST_CASE("reduce cancels adjacent inverse pairs") {
  const Generator a{0, false}, ai{0, true}, b{1, false}, bi{1, true};

  CHECK(reduce(GroupWord{{a, ai}}) == GroupWord::identity());
  CHECK(reduce(GroupWord{{a, b, bi, a}}) == GroupWord{{a, a}});
  CHECK(reduce(GroupWord::identity()) == GroupWord::identity());

  // Cascade: the outer pair only cancels after the inner one goes.
  CHECK(reduce(GroupWord{{a, b, bi, ai}}) == GroupWord::identity());
}

TEST_CASE("reduce matches the scan-and-delete oracle on random words") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::vector<Generator> raw = random_letters(rng, 20);
    const GroupWord got = reduce(GroupWord{raw});
    CHECK(got.letters() == scan_and_delete(raw));
    CHECK(got.is_reduced());
  }
}

TEST_CASE("multiply has the identity as neutral element and cancels inverses") {
  const GroupWord w = GroupWord::parse("a b' a");
  CHECK(multiply(GroupWord::identity(), w) == w);
  CHECK(multiply(w, GroupWord::identity()) == w);
  CHECK(multiply(GroupWord::parse("a"), GroupWord::parse("a'")) ==
        GroupWord::identity());
}

TEST_CASE("multiply is associative; oracle is reduce of the flat concatenation") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const GroupWord u = rng.word(3, 6), v = rng.word(3, 6), w = rng.word(3, 6);
    CHECK(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)));

    std::vector<Generator> flat = u.letters();
    flat.insert(flat.end(), v.letters().begin(), v.letters().end());
    CHECK(multiply(u, v) == reduce(GroupWord{flat}));
  }
}

TEST_CASE("invert reverses and flips; w * w' is the identity") {
  CHECK(invert(GroupWord::identity()) == GroupWord::identity());
  CHECK(invert(GroupWord::parse("a b")) == GroupWord::parse("b' a'"));

  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const GroupWord w = rng.word(4, 8);
    CHECK(multiply(w, invert(w)) == GroupWord::identity());
    CHECK(invert(invert(w)) == w);
  }
}

TEST_CASE("normalize picks the shortlex-smaller of a word and its inverse") {
  CHECK(normalize(GroupWord::parse("b a")) == GroupWord::parse("a' b'"));
  CHECK(normalize(GroupWord::parse("a' b'")) == GroupWord::parse("a' b'"));
  CHECK(normalize(GroupWord::identity()) == GroupWord::identity());

  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const GroupWord w = rng.word(3, 7);
    CHECK(normalize(w) == normalize(invert(w)));
    CHECK((normalize(w) == w || normalize(w) == invert(w)));
  }
}

TEST_CASE("textual syntax round-trips") {
  for (const std::string text : {"1", "a", "a'", "a b' a", "z", "c b a'"}) {
    const GroupWord w = GroupWord::parse(text);
    CHECK(w.str() == text);
    CHECK(GroupWord::parse(w.str()) == w);
  }
  CHECK(GroupWord::identity().str() == "1");
  CHECK(GroupWord::gen(0).str() == "a");
  CHECK(GroupWord::gen(1, true).str() == "b'");
}

TEST_CASE("parse rejects malformed words") {
  CHECK_THROWS_AS(GroupWord::parse(""), ParseError);
  CHECK_THROWS_AS(GroupWord::parse("A"), ParseError);
  CHECK_THROWS_AS(GroupWord::parse("a''"), ParseError);
  CHECK_THROWS_AS(GroupWord::parse("1 a"), ParseError);
  CHECK_THROWS_AS(GroupWord::parse("a;b"), ParseError);
}

TEST_CASE("words order by shortlex") {
  CHECK(GroupWord::identity() < GroupWord::parse("a"));
  CHECK(GroupWord::parse("a") < GroupWord::parse("a'"));
  CHECK(GroupWord::parse("b") < GroupWord::parse("a a"));
  CHECK(GroupWord::parse("a b") < GroupWord::parse("b a"));
}

TEST_CASE("min_generator_count names the highest letter used") {
  CHECK(GroupWord::identity().min_generator_count() == 0);
  CHECK(GroupWord::parse("a").min_generator_count() == 1);
  CHECK(GroupWord::parse("a c'").min_generator_count() == 3);
}

}  // namespace
}  // namespace grope
