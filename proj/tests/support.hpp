#pragma once

#include <random>
#include <string>
#include <vector>

#include "torusconj/free_group.hpp"

namespace testing_support {

using torusconj::Letter;
using torusconj::Word;

inline Word random_word(std::mt19937& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> key(0, 2 * rank - 1);
  std::vector<Letter> letters;
  int n = len(rng);
  for (int i = 0; i < n; ++i) letters.push_back(Letter::from_key(key(rng)));
  return Word(std::move(letters));
}

inline Word w(const std::string& text, int rank = 2) { return torusconj::FreeGroup(rank).parse(text); }

}  // namespace testing_support
