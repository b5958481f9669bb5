#include "conjsep/word.hpp"

#include <algorithm>
#include <cctype>

namespace conjsep {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 1 || rank > 26) throw input_error("alphabet rank must be in [1,26]");
  for (int i = 0; i < rank; ++i) names_.push_back(static_cast<char>('a' + i));
}

Alphabet::Alphabet(int rank, std::string names) : rank_(rank), names_(std::move(names)) {
  if (rank < 1 || rank > 26) throw input_error("alphabet rank must be in [1,26]");
  if (static_cast<int>(names_.size()) != rank) throw input_error("alphabet name count != rank");
  for (char c : names_)
    if (!std::islower(static_cast<unsigned char>(c))) throw input_error("alphabet names must be lowercase ASCII");
  for (size_t i = 0; i < names_.size(); ++i)
    for (size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw input_error("alphabet names must be distinct");
}

int Alphabet::gen_index(char lower) const {
  for (int i = 0; i < rank_; ++i)
    if (names_[static_cast<size_t>(i)] == lower) return i;
  return -1;
}

Letter Alphabet::letter_of_char(char c) const {
  const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
  const char lower = upper ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c;
  const int g = gen_index(lower);
  if (g < 0) throw input_error(std::string("unknown generator letter '") + c + "'");
  return upper ? -(g + 1) : g + 1;
}

char Alphabet::char_of_letter(Letter l) const {
  const int g = gen_of(l);
  if (g >= rank_) throw input_error("letter outside alphabet");
  const char c = names_[static_cast<size_t>(g)];
  return is_positive(l) ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

namespace {
std::vector<Letter> reduce(const std::vector<Letter>& in) {
  std::vector<Letter> out;
  out.reserve(in.size());
  for (Letter l : in) {
    if (l == 0) throw input_error("letter 0 is not valid");
    if (!out.empty() && out.back() == inverse_letter(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}
}  // namespace

Word::Word(std::vector<Letter> letters) : ls_(reduce(letters)) {}

Word Word::parse(const std::string& text, const Alphabet& a) {
  if (text == "1") return Word();
  std::vector<Letter> ls;
  ls.reserve(text.size());
  for (char c : text) ls.push_back(a.letter_of_char(c));
  return Word(std::move(ls));
}

std::string Word::str(const Alphabet& a) const {
  if (ls_.empty()) return "1";
  std::string s;
  s.reserve(ls_.size());
  for (Letter l : ls_) s.push_back(a.char_of_letter(l));
  return s;
}

Word Word::inverse() const {
  std::vector<Letter> ls(ls_.rbegin(), ls_.rend());
  for (Letter& l : ls) l = inverse_letter(l);
  Word w;
  w.ls_ = std::move(ls);  // reversal of a reduced word is reduced
  return w;
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> ls = ls_;
  for (Letter l : rhs.ls_) {
    if (!ls.empty() && ls.back() == inverse_letter(l))
      ls.pop_back();
    else
      ls.push_back(l);
  }
  Word w;
  w.ls_ = std::move(ls);
  return w;
}

Word Word::conjugated_by(const Word& z) const { return z.inverse() * (*this) * z; }

Word Word::pow(long long k) const {
  const Word base = k >= 0 ? *this : inverse();
  long long n = k >= 0 ? k : -k;
  Word acc;
  for (long long i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

bool Word::operator<(const Word& o) const {
  if (ls_.size() != o.ls_.size()) return ls_.size() < o.ls_.size();
  for (size_t i = 0; i < ls_.size(); ++i)
    if (ls_[i] != o.ls_[i]) return letter_order(ls_[i]) < letter_order(o.ls_[i]);
  return false;
}

size_t WordHash::operator()(const Word& w) const {
  size_t h = 1469598103934665603ull;
  for (Letter l : w.letters()) {
    h ^= static_cast<size_t>(l + 64);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<long long> abelianize(const Word& w, int rank) {
  std::vector<long long> v(static_cast<size_t>(rank), 0);
  for (Letter l : w.letters()) v[static_cast<size_t>(gen_of(l))] += is_positive(l) ? 1 : -1;
  return v;
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  int i = 0, j = w.size() - 1;
  std::vector<Letter> prefix;
  while (i < j && w.at(i) == inverse_letter(w.at(j))) {
    prefix.push_back(w.at(i));
    ++i;
    --j;
  }
  std::vector<Letter> core;
  for (int k = i; k <= j; ++k) core.push_back(w.at(k));
  // w == u * core * u^-1 with u = prefix, so u^-1 * w * u == core.
  return {Word(std::move(core)), Word(std::move(prefix))};
}

std::optional<Word> free_conjugacy(const Word& x, const Word& y) {
  auto [cx, zx] = cyclic_reduce(x);
  auto [cy, zy] = cyclic_reduce(y);
  if (cx.size() != cy.size()) return std::nullopt;
  const int n = cx.size();
  if (n == 0) return zx * zy.inverse();
  for (int k = 0; k < n; ++k) {
    bool match = true;
    for (int i = 0; i < n && match; ++i)
      if (cx.at((i + k) % n) != cy.at(i)) match = false;
    if (match) {
      std::vector<Letter> p;
      for (int i = 0; i < k; ++i) p.push_back(cx.at(i));
      // z^-1 x z == y for z = zx * p * zy^-1.
      return zx * Word(std::move(p)) * zy.inverse();
    }
  }
  return std::nullopt;
}

std::vector<Word> reduced_words_of_length(int rank, int len) {
  std::vector<Word> out;
  if (len == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<Letter> cur;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == len) {
      Word w;
      w = Word(cur);
      out.push_back(std::move(w));
      return;
    }
    for (int k = 0; k < 2 * rank; ++k) {
      Letter l = letter_at_order(k);
      if (!cur.empty() && cur.back() == inverse_letter(l)) continue;
      cur.push_back(l);
      self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<Word> reduced_words_up_to(int rank, int max_len) {
  std::vector<Word> out;
  for (int len = 0; len <= max_len; ++len) {
    auto v = reduced_words_of_length(rank, len);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace conjsep
