// word.hpp -- freely reduced words over a signed generator alphabet.
//
// Words are kept reduced at all times; reduction happens at construction.
// Text format: lowercase letter = generator, uppercase = its inverse,
// "1" = the empty word.
#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conjsep/error.hpp"

namespace conjsep {

// A letter is g+1 for generator g and -(g+1) for its inverse.
using Letter = int;

constexpr Letter inverse_letter(Letter l) { return -l; }
constexpr int gen_of(Letter l) { return (l > 0 ? l : -l) - 1; }
constexpr bool is_positive(Letter l) { return l > 0; }

// Shortlex position of a letter: a < A < b < B < ...
constexpr int letter_order(Letter l) {
  return 2 * gen_of(l) + (is_positive(l) ? 0 : 1);
}
constexpr Letter letter_at_order(int k) {
  return (k % 2 == 0) ? k / 2 + 1 : -(k / 2 + 1);
}

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(int rank);
  Alphabet(int rank, std::string names);

  int rank() const { return rank_; }
  char name(int gen) const { return names_[static_cast<size_t>(gen)]; }
  // Index of the generator printed as `lower`, or -1.
  int gen_index(char lower) const;
  Letter letter_of_char(char c) const;  // throws input_error
  char char_of_letter(Letter l) const;

  bool operator==(const Alphabet&) const = default;

 private:
  int rank_ = 0;
  std::string names_;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // freely reduces

  static Word parse(const std::string& text, const Alphabet& a);
  std::string str(const Alphabet& a) const;

  int size() const { return static_cast<int>(ls_.size()); }
  bool empty() const { return ls_.empty(); }
  Letter at(int i) const { return ls_[static_cast<size_t>(i)]; }
  const std::vector<Letter>& letters() const { return ls_; }

  Word inverse() const;
  Word operator*(const Word& rhs) const;
  // z^-1 * w * z
  Word conjugated_by(const Word& z) const;
  Word pow(long long k) const;

  bool operator==(const Word& o) const { return ls_ == o.ls_; }
  bool operator!=(const Word& o) const { return ls_ != o.ls_; }
  // shortlex
  bool operator<(const Word& o) const;

 private:
  std::vector<Letter> ls_;
};

struct WordHash {
  size_t operator()(const Word& w) const;
};

std::vector<long long> abelianize(const Word& w, int rank);

// (core, z) with z^-1 * w * z == core and core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

// Conjugacy oracle by cyclic reduction. Returns a witness z with
// z^-1 * x * z == y, or nullopt.
std::optional<Word> free_conjugacy(const Word& x, const Word& y);

// All freely reduced words of length <= max_len, shortlex order.
std::vector<Word> reduced_words_up_to(int rank, int max_len);
// Only the words of exactly length `len`, shortlex order.
std::vector<Word> reduced_words_of_length(int rank, int len);

}  // namespace conjsep
