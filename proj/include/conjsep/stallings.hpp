// stallings.hpp -- folded core graphs for finitely generated subgroups of
// free groups: membership, finite-index machinery (transversals, Schreier
// generators) and intersections via the product construction.
#pragma once

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "conjsep/word.hpp"

namespace conjsep {

// Deterministic folded graph; state 0 is the basepoint. Edges are stored in
// both directions: step(s, l) follows the edge labelled l (signed letter).
class StallingsGraph {
 public:
  static StallingsGraph fold(int rank, const std::vector<Word>& gens);

  int rank() const { return rank_; }
  int num_states() const { return static_cast<int>(next_.size()); }
  int basepoint() const { return 0; }

  // Target of the l-labelled edge at `state`, or -1.
  int step(int state, Letter l) const;
  bool contains(const Word& w) const;
  bool complete() const;

  struct Transversal {
    std::vector<Word> reps;  // reps[0] is the empty word
  };
  // Finite index iff the graph is complete; reps are shortlex-minimal.
  std::optional<std::pair<int, Transversal>> index_and_transversal() const;

  // Coset of w: index i with H * reps[i] == H * w. Requires completeness.
  int coset_of(const Word& w) const;

  // Nontrivial Schreier generators b_i a (rep of b_i a)^-1; requires
  // finite index.
  std::vector<Word> schreier_generators(const Transversal& t) const;

  // Reduced loop words at the basepoint (subgroup elements), shortlex,
  // length <= max_len.
  std::vector<Word> loops_up_to(int max_len) const;
  std::vector<Word> loops_of_length(int len) const;

  // (src, gen, dst) for every positively labelled edge.
  std::vector<std::tuple<int, int, int>> positive_edges() const;

  // Used by fold/intersect after construction.
  static StallingsGraph from_edges(int rank, int states,
                                   const std::vector<std::tuple<int, int, int>>& pos_edges,
                                   int base);

 private:
  int rank_ = 0;
  std::vector<std::vector<int>> next_, prev_;  // [state][gen] -> state or -1

  // Canonical renumber by shortlex BFS from the basepoint; drops
  // unreachable states.
  void canonicalize(int base);
  void trim_core(int base);
};

// Loop language of the intersection H1 cap H2.
StallingsGraph intersect(const StallingsGraph& g1, const StallingsGraph& g2);

}  // namespace conjsep
