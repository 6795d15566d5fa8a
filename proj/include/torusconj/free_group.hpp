#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torusconj {

// A generator index with an explicit sign. Generators are 0-based.
struct Letter {
  int gen = 0;
  int sign = 1;

  Letter inverse() const { return {gen, -sign}; }
  // Position in the fixed letter order a < a' < b < b' < ...
  int key() const { return 2 * gen + (sign < 0 ? 1 : 0); }
  static Letter from_key(int key) { return {key / 2, (key % 2) ? -1 : 1}; }

  bool operator==(const Letter&) const = default;
};

// A freely reduced word. Every constructor reduces its input.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);
  Word(std::initializer_list<Letter> letters) : Word(std::vector<Letter>(letters)) {}

  static Word generator(int gen, int sign = 1) { return Word({Letter{gen, sign}}); }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& front() const { return letters_.front(); }
  const Letter& back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  const std::vector<Letter>& letters() const { return letters_; }

  Word inverse() const;
  Word pow(long n) const;
  // Letters [from, from+len) as a word (already reduced).
  Word subword(std::size_t from, std::size_t len) const;

  friend Word operator*(const Word& x, const Word& y);
  Word& operator*=(const Word& y) { return *this = *this * y; }

  bool operator==(const Word&) const = default;
  // Shortlex order: length first, then letters by key.
  std::strong_ordering operator<=>(const Word& other) const;

 private:
  std::vector<Letter> letters_;
};

// Unique freely reduced form of a raw letter sequence.
Word reduce(std::span<const Letter> letters);

// Conjugation a^g = g^-1 a g.
inline Word conjugate(const Word& a, const Word& g) { return g.inverse() * a * g; }

// Finite-rank free group with named generators.
class FreeGroup {
 public:
  explicit FreeGroup(int rank);
  explicit FreeGroup(std::vector<std::string> names);

  int rank() const { return static_cast<int>(names_.size()); }
  const std::string& name(int gen) const { return names_.at(gen); }
  const std::vector<std::string>& names() const { return names_; }
  Word generator(int gen) const { return Word::generator(gen); }

  // Textual syntax: generator names juxtaposed, optional spaces, trailing
  // apostrophe for inverse, optional ^n exponent, `1` for the identity.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  bool operator==(const FreeGroup&) const = default;

  // a, b, c, ... (x1, x2, ... beyond 26 generators).
  static std::vector<std::string> default_names(int rank);

 private:
  std::vector<std::string> names_;
};

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  Word conjugator;
  Word core;
};
CyclicReduction cyclic_reduce(const Word& w);

// Least rotation (shortlex) of a cyclically reduced word.
Word least_rotation(const Word& core);

// Returns w with w^-1 u w = v, or nothing if u, v are not conjugate.
// Among rotations the one with the least starting index is used.
std::optional<Word> conjugator(const Word& u, const Word& v);
inline bool is_conjugate(const Word& u, const Word& v) { return conjugator(u, v).has_value(); }

// Primitive root r of w (w = r^n, n >= 1). Root of the identity is the identity.
Word root(const Word& w);

bool commute(const Word& u, const Word& v);

// Exponent sum of each generator (abelianization image).
std::vector<long> exponent_sums(const Word& w, int rank);

}  // namespace torusconj
