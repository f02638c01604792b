#pragma once

#include <string>
#include <vector>

#include "hz/geom/schottky.hpp"

namespace hz::geom {

// Element of the free group on the generators. Letters compare in the order
// -r < ... < -1 < 1 < ... < r, which is plain integer order.
struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool is_reduced() const;
  bool is_cyclically_reduced() const;

  Word inverse() const;
  // Free reduction (cancels adjacent x, -x).
  Word reduced() const;
  // Strips conjugating letter pairs from both ends of a reduced word.
  Word cyclically_reduced() const;
  // Lexicographically least rotation.
  Word canonical_rotation() const;
  // Smallest p dividing n with letters invariant under rotation by p.
  std::size_t primitive_period() const;

  Word power(int m) const;

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;
};

// Product g_{a1} g_{a2} ... g_{an}, composed left to right.
MobiusMap word_matrix(const Word& w, const SchottkyData& group);

// Same product accumulated right to left; used to check composition
// consistency.
MobiusMap word_matrix_right(const Word& w, const SchottkyData& group);

// "1,-2,1" style rendering; the empty word renders as "e".
std::string to_string(const Word& w);
Word parse_word(const std::string& text);

// Number of reduced words of length n in the free group of rank r.
double reduced_word_count(int rank, int n);

// Number of cyclically reduced words of length n in the free group of rank r.
double cyclically_reduced_count(int rank, int n);

}  // namespace hz::geom
