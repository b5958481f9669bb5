// nfa.hpp -- nondeterministic automata over signed generator alphabets,
// used as the carrier for rational subsets. Letter 0 is epsilon.
//
// Text format (one automaton per file):
//   nfa states=<n> initial=<i,...> final=<f,...>
//   <src> <letter> <dst>        one transition per line
#pragma once

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "conjsep/stallings.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

struct Nfa {
  int rank = 0;
  int states = 0;
  std::vector<std::tuple<int, Letter, int>> trans;
  std::vector<int> initial, finals;
};

Nfa nfa_from_words(int rank, const std::vector<Word>& ws);
// Loop language of a Stallings graph (image = the subgroup).
Nfa nfa_from_stallings(const StallingsGraph& g);
// Flower on `gens` followed by a tail spelling `rep`: image = <gens> * rep.
Nfa nfa_coset(int rank, const std::vector<Word>& gens, const Word& rep);
Nfa nfa_union(const Nfa& a, const Nfa& b);
// Image r * K (left) or K * r (right).
Nfa nfa_translate(const Nfa& a, const Word& r, bool left);
// Replace every letter by a word (apply a homomorphism to the image).
Nfa nfa_substitute(const Nfa& a, int new_rank, const std::function<Word(Letter)>& image);

// Literal acceptance of the spelling w (with epsilon moves).
bool nfa_accepts(const Nfa& a, const Word& w);

// Benois saturation: adds epsilon transitions until the automaton accepts
// the reduced form of every element of its image. After saturation,
// membership of a reduced word in the image is literal acceptance.
Nfa benois_saturate(const Nfa& a, int state_budget = 50000);
// Exact membership of (the element of) reduced `w` in the image of `a`.
bool rational_member(const Nfa& a, const Word& w);

// Reduced forms of all accepted spellings of length <= max_len, shortlex,
// deduped. Every image element has some spelling, so growing max_len
// eventually reaches all of them.
std::vector<Word> nfa_words_up_to(const Nfa& a, int max_len);

std::string nfa_to_text(const Nfa& a, const Alphabet& alpha);
Nfa nfa_from_text(const std::string& text, const Alphabet& alpha);

}  // namespace conjsep
