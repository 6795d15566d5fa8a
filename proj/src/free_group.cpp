#include "torusconj/free_group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "torusconj/errors.hpp"

namespace torusconj {

Word reduce(std::span<const Letter> letters) {
  return Word(std::vector<Letter>(letters.begin(), letters.end()));
}

Word::Word(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw DomainError("letter sign must be +1 or -1");
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::inverse() const {
  Word r;
  r.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back(it->inverse());
  return r;
}

Word Word::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  Word result;
  Word base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Word Word::subword(std::size_t from, std::size_t len) const {
  Word r;
  r.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                    letters_.begin() + static_cast<std::ptrdiff_t>(from + len));
  return r;
}

Word operator*(const Word& x, const Word& y) {
  std::size_t cancel = 0;
  const std::size_t nx = x.letters_.size();
  const std::size_t ny = y.letters_.size();
  while (cancel < nx && cancel < ny && x.letters_[nx - 1 - cancel] == y.letters_[cancel].inverse()) {
    ++cancel;
  }
  Word r;
  r.letters_.reserve(nx + ny - 2 * cancel);
  r.letters_.insert(r.letters_.end(), x.letters_.begin(),
                    x.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
  r.letters_.insert(r.letters_.end(), y.letters_.begin() + static_cast<std::ptrdiff_t>(cancel),
                    y.letters_.end());
  return r;
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (auto c = letters_[i].key() <=> other.letters_[i].key(); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<std::string> FreeGroup::default_names(int rank) {
  std::vector<std::string> names;
  for (int i = 0; i < rank; ++i) {
    if (rank <= 26) {
      names.emplace_back(1, static_cast<char>('a' + i));
    } else {
      names.push_back("x" + std::to_string(i + 1));
    }
  }
  return names;
}

FreeGroup::FreeGroup(int rank) : FreeGroup(default_names(rank)) {}

FreeGroup::FreeGroup(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw DomainError("free group rank must be at least 1");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw FormatError("empty generator name");
    for (char ch : n) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
        throw FormatError("generator name '" + n + "' must be alphanumeric");
    }
    if (std::isdigit(static_cast<unsigned char>(n[0])))
      throw FormatError("generator name '" + n + "' starts with a digit");
    if (!seen.insert(n).second) throw FormatError("duplicate generator name '" + n + "'");
  }
}

Word FreeGroup::parse(std::string_view text) const {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  while (true) {
    skip_space();
    if (pos >= text.size()) break;
    std::vector<Letter> token;
    if (text[pos] == '1') {
      ++pos;
    } else {
      int best = -1;
      std::size_t best_len = 0;
      for (int g = 0; g < rank(); ++g) {
        const auto& n = names_[g];
        if (n.size() > best_len && text.substr(pos, n.size()) == n) {
          best = g;
          best_len = n.size();
        }
      }
      if (best < 0) {
        throw FormatError("unknown generator symbol at '" + std::string(text.substr(pos)) + "'");
      }
      pos += best_len;
      token.push_back({best, 1});
    }
    int sign = 1;
    while (pos < text.size() && text[pos] == '\'') {
      sign = -sign;
      ++pos;
    }
    long exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t start = pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string digits(text.substr(start, pos - start));
      if (digits.empty() || digits == "-" || digits == "+") throw FormatError("missing exponent after '^'");
      if (digits[0] == '+') digits.erase(0, 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (ec != std::errc() || ptr != digits.data() + digits.size())
        throw FormatError("bad exponent '" + digits + "'");
    }
    if (!token.empty()) {
      Letter l = token.front();
      if (sign < 0) l = l.inverse();
      if (exponent < 0) {
        l = l.inverse();
        exponent = -exponent;
      }
      for (long i = 0; i < exponent; ++i) letters.push_back(l);
    }
  }
  return reduce(letters);
}

std::string FreeGroup::format(const Word& w) const {
  if (w.empty()) return "1";
  bool spaced = std::any_of(names_.begin(), names_.end(), [](const auto& n) { return n.size() > 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (spaced && i > 0) out += ' ';
    out += names_.at(w[i].gen);
    if (w[i].sign < 0) out += '\'';
  }
  return out;
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  const std::size_t n = w.size();
  while (2 * k + 1 < n && w[k] == w[n - 1 - k].inverse()) ++k;
  return {w.subword(0, k), w.subword(k, n - 2 * k)};
}

namespace {

Word rotate(const Word& core, std::size_t i) {
  std::vector<Letter> r(core.begin() + static_cast<std::ptrdiff_t>(i), core.end());
  r.insert(r.end(), core.begin(), core.begin() + static_cast<std::ptrdiff_t>(i));
  return Word(std::move(r));
}

}  // namespace

Word least_rotation(const Word& core) {
  Word best = core;
  for (std::size_t i = 1; i < core.size(); ++i) {
    Word r = rotate(core, i);
    if (r < best) best = std::move(r);
  }
  return best;
}

std::optional<Word> conjugator(const Word& u, const Word& v) {
  CyclicReduction cu = cyclic_reduce(u);
  CyclicReduction cv = cyclic_reduce(v);
  if (cu.core.size() != cv.core.size()) return std::nullopt;
  if (cu.core.empty()) return Word();
  for (std::size_t i = 0; i < cu.core.size(); ++i) {
    if (rotate(cu.core, i) == cv.core) {
      // rot_i(core) = x^-1 core x with x the first i letters.
      Word x = cu.core.subword(0, i);
      return cu.conjugator * x * cv.conjugator.inverse();
    }
  }
  return std::nullopt;
}

Word root(const Word& w) {
  CyclicReduction c = cyclic_reduce(w);
  const std::size_t n = c.core.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = c.core[i] == c.core[i - d];
    if (periodic) return c.conjugator * c.core.subword(0, d) * c.conjugator.inverse();
  }
  return w;
}

bool commute(const Word& u, const Word& v) { return u * v == v * u; }

std::vector<long> exponent_sums(const Word& w, int rank) {
  std::vector<long> v(static_cast<std::size_t>(rank), 0);
  for (const Letter& l : w) v.at(static_cast<std::size_t>(l.gen)) += l.sign;
  return v;
}

}  // namespace torusconj
