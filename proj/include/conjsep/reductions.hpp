// reductions.hpp -- the structural reductions: rational-set decomposition
// over a finite extension, twisted-conjugacy-to-conjugacy in G^phi, the
// semidirect conjugacy split by t-exponent, and the finite-extension
// conjugacy decomposition into fiber twisted subinstances.
#pragma once

#include <optional>
#include <vector>

#include "conjsep/extensions.hpp"
#include "conjsep/nfa.hpp"
#include "conjsep/setspec.hpp"

namespace conjsep {

// Pieces L_i with image(K) = union of L_i b_i; each L_i is an automaton
// over the fiber alphabet whose image lies in N. Built by running K in
// parallel with the right coset action and transducing each step to its
// fiber contribution.
struct RationalDecomposition {
  std::vector<Nfa> pieces;  // indexed by coset - 1
};
RationalDecomposition decompose_over_extension(const Nfa& k_ext, const ExtensionDatum& d);

// SetSpec over the extension alphabet -> automaton with the same image.
Nfa setspec_to_nfa(const SetSpec& s, int alphabet_rank);

// Lemma 5.1 dispatch for x ~ y in G x|_phi Z.
enum class SdInstanceKind { No, BrinkmannConj, Twisted, Generic };
struct SdReduction {
  SdInstanceKind kind = SdInstanceKind::Generic;
  Word x, y;  // fiber parts (for BrinkmannConj / Twisted)
};
SdReduction semidirect_conjugacy_instance(const SdElement& x, const SdElement& y);

// Theorem 4.10: y in phi-TCC(K)  <=>  t^-1 (y phi^-1) is conjugate into
// t^-1 (K phi^-1) in G^phi. Everything is expressed over the G^phi
// alphabet (fiber letters + t).
struct GphiConjInstance {
  GPhi gphi;
  SetSpec set;  // over the G^phi alphabet
  Word target;  // over the G^phi alphabet
};
GphiConjInstance twisted_to_gphi(const Automorphism& phi, const ViaCertificate& cert,
                                 const SetSpec& K, const Word& y);

// Convert a G^phi conjugacy witness t^n z for the reduced instance back to
// a twisted conjugator u with (u^-1 phi) k u = y.
Word gphi_witness_to_twisted(const Automorphism& phi, const Word& k, long long n, const Word& z);

// Theorem 4.6: for target x b_i conjugate into K, one fiber twisted
// membership subinstance per (j, k in beta_{i,j}). The subinstance asks
// whether (x nu_{k,j}^-1) phi_k lies in phi_j-TCC_N(L_j); in the
// left-twisted convention used everywhere else this is a phi_j^-1-twisted
// membership.
struct ExtSubinstance {
  int j = 1;  // piece index
  int k = 1;  // transversal conjugator index
  Automorphism aut;         // phi_j^-1
  ViaCertificate via;       // derived from the sigma-orbit of b_j
  Word target;              // fiber word
};
std::vector<ExtSubinstance> extension_conjugacy_decompose(const ExtensionDatum& d,
                                                          const RationalDecomposition& pieces,
                                                          const ExtElement& target);

}  // namespace conjsep
