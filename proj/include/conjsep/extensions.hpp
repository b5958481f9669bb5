// extensions.hpp -- normal-form arithmetic for the three extension shapes
// the deciders work in: G x|_phi Z, the finite extension G^phi with
// t^p = Delta, and a general finite extension presented by an explicit
// datum (transversal-indexed automorphisms, cocycle and index table).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conjsep/automorphism.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

// --- G x|_phi Z ---------------------------------------------------------

// Unique normal form t^a g.
struct SdElement {
  long long t = 0;
  Word g;
  bool operator==(const SdElement&) const = default;
};

SdElement sd_multiply(const Automorphism& phi, const SdElement& x, const SdElement& y);
SdElement sd_invert(const Automorphism& phi, const SdElement& x);

// --- G^phi ---------------------------------------------------------------

struct GPhi {
  Automorphism phi;
  long long p = 1;
  Word delta;
};

// Unique normal form t^k g with 0 <= k < p.
struct GPhiElement {
  long long k = 0;
  Word g;
  bool operator==(const GPhiElement&) const = default;
};

GPhiElement gphi_normalize(const GPhi& e, long long k, const Word& g);
GPhiElement gphi_multiply(const GPhi& e, const GPhiElement& x, const GPhiElement& y);
GPhiElement gphi_invert(const GPhi& e, const GPhiElement& x);

// --- general finite extensions -------------------------------------------

// G = N b_1 u ... u N b_m with b_1 = 1, N free of rank fiber_rank.
// phis[i] is x -> b_{i+1}^-1 x b_{i+1}; b_i b_j = nu[i][j] b_{sigma[i][j]}.
struct ExtensionDatum {
  int fiber_rank = 1;
  int m = 1;
  std::vector<Automorphism> phis;          // size m, phis[0] = identity
  std::vector<std::vector<Word>> nu;       // m x m
  std::vector<std::vector<int>> sigma;     // m x m, 1-based entries
};

// Unique normal form g * b_coset (coset is 1-based).
struct ExtElement {
  Word u;
  int coset = 1;
  bool operator==(const ExtElement&) const = default;
};

// nullopt when valid; otherwise a human-readable violation.
std::optional<std::string> validate_extension_datum(const ExtensionDatum& d);

ExtElement ext_multiply(const ExtensionDatum& d, const ExtElement& x, const ExtElement& y);
ExtElement ext_invert(const ExtensionDatum& d, const ExtElement& x);
// The j with sigma[i][j] = 1.
int ext_inverse_coset(const ExtensionDatum& d, int i);

// Words over the extended alphabet (fiber letters first, then one letter
// per transversal representative b_2..b_m) evaluate to normal forms.
ExtElement ext_evaluate(const ExtensionDatum& d, const Word& w);
Word ext_to_word(const ExtensionDatum& d, const ExtElement& x);
int ext_alphabet_rank(const ExtensionDatum& d);

// Split extension of F_rank by the cyclic group generated by s (s^order
// must be the identity automorphism).
ExtensionDatum split_extension_datum(const Automorphism& s, int order);
// The datum of G^phi: b_i = t^(i-1).
ExtensionDatum gphi_extension_datum(const GPhi& e);

// phi_j is virtually inner with p derived from the sigma-orbit of b_j and
// Delta = the fiber part of b_j^p; checked before returning.
ViaCertificate datum_via_certificate(const ExtensionDatum& d, int j);

// b_k^-1 b_j b_k split into its fiber part and coset.
ExtElement datum_conjugated_rep(const ExtensionDatum& d, int k, int j);

std::string extension_datum_to_text(const ExtensionDatum& d);
ExtensionDatum extension_datum_from_text(const std::string& text);

}  // namespace conjsep
