#include "hz/geom/word.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hz/error.hpp"

namespace hz::geom {

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == -letters[i - 1]) return false;
  }
  return true;
}

bool Word::is_cyclically_reduced() const {
  if (!is_reduced()) return false;
  return letters.size() < 2 || letters.front() != -letters.back();
}

Word Word::inverse() const {
  Word out;
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back(static_cast<Letter>(-*it));
  return out;
}

Word Word::reduced() const {
  Word out;
  for (Letter x : letters) {
    if (!out.letters.empty() && out.letters.back() == -x) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(x);
    }
  }
  return out;
}

Word Word::cyclically_reduced() const {
  const Word r = reduced();
  std::size_t lo = 0;
  std::size_t hi = r.letters.size();
  while (hi - lo >= 2 && r.letters[lo] == -r.letters[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word{{r.letters.begin() + static_cast<std::ptrdiff_t>(lo), r.letters.begin() + static_cast<std::ptrdiff_t>(hi)}};
}

Word Word::canonical_rotation() const {
  const std::size_t n = letters.size();
  if (n < 2) return *this;
  // Booth's least-rotation algorithm.
  std::vector<Letter> s(letters);
  s.insert(s.end(), letters.begin(), letters.end());
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    long i = f[j - k - 1];
    while (i != -1 && s[j] != s[k + static_cast<std::size_t>(i) + 1]) {
      if (s[j] < s[k + static_cast<std::size_t>(i) + 1]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && s[j] != s[k]) {
      if (s[j] < s[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  Word out;
  out.letters.assign(s.begin() + static_cast<std::ptrdiff_t>(k), s.begin() + static_cast<std::ptrdiff_t>(k + n));
  return out;
}

std::size_t Word::primitive_period() const {
  const std::size_t n = letters.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = letters[i] == letters[i - p];
    if (periodic) return p;
  }
  return n;
}

Word Word::power(int m) const {
  Word base = m < 0 ? inverse() : *this;
  Word out;
  for (int i = 0; i < std::abs(m); ++i) out.letters.insert(out.letters.end(), base.letters.begin(), base.letters.end());
  return out;
}

MobiusMap word_matrix(const Word& w, const SchottkyData& group) {
  MobiusMap m;
  for (Letter x : w.letters) m = m * group.letter_matrix(x);
  return m;
}

MobiusMap word_matrix_right(const Word& w, const SchottkyData& group) {
  MobiusMap m;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) m = group.letter_matrix(*it) * m;
  return m;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) os << ',';
    os << static_cast<int>(w.letters[i]);
  }
  return os.str();
}

Word parse_word(const std::string& text) {
  Word w;
  if (text == "e" || text.empty()) return w;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InputError, "bad letter '" + tok + "' in word '" + text + "'");
    }
    if (v == 0 || std::abs(v) > 127) throw Error(ErrorKind::InputError, "bad letter in word '" + text + "'");
    w.letters.push_back(static_cast<Letter>(v));
  }
  return w;
}

double reduced_word_count(int rank, int n) {
  if (n == 0) return 1.0;
  return 2.0 * rank * std::pow(2.0 * rank - 1.0, n - 1);
}

double cyclically_reduced_count(int rank, int n) {
  if (n == 0) return 1.0;
  const double q = 2.0 * rank - 1.0;
  return std::pow(q, n) + 1.0 + (rank - 1.0) * (1.0 + (n % 2 == 0 ? 1.0 : -1.0));
}

}  // namespace hz::geom
