// setspec.hpp -- the three input set classes closed over by the decision
// procedures: finite element lists, cosets of finitely generated subgroups,
// and rational sets given by automata.
#pragma once

#include <string>
#include <vector>

#include "conjsep/automorphism.hpp"
#include "conjsep/nfa.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

struct CosetSpec {
  std::vector<Word> gens;
  Word rep;  // the set is <gens> * rep
};

struct SetSpec {
  enum class Tag { Fin, Coset, Rat };
  Tag tag = Tag::Fin;
  std::vector<Word> fin;
  CosetSpec coset;
  Nfa rat;

  static SetSpec finite(std::vector<Word> ws);
  static SetSpec coset_of(std::vector<Word> gens, Word rep);
  static SetSpec rational(Nfa a);

  // Exact membership for subsets of a free group (reduced w).
  bool free_contains(const Word& w, int rank) const;

  // Image under an automorphism of the ambient group: Fin and Coset map
  // elementwise / by generators; Rat substitutes letters, which realizes
  // the image of the rational set exactly.
  SetSpec mapped(const Automorphism& phi, bool use_inverse, int rank) const;

  std::string describe(const Alphabet& a) const;
};

}  // namespace conjsep
