// automorphism.hpp -- generator-image maps with an explicit inverse.
//
// An Automorphism stores forward images and the claimed inverse images of
// every generator. Inversion is never computed; the inverse is input and
// verified. Over a free group `apply` works directly; other groups reuse
// the same data with their own normal forms (see context.hpp).
#pragma once

#include <optional>
#include <vector>

#include "conjsep/word.hpp"

namespace conjsep {

struct Automorphism {
  std::vector<Word> fwd;
  std::vector<Word> bwd;

  int rank() const { return static_cast<int>(fwd.size()); }
  bool has_inverse() const { return !bwd.empty(); }

  // Free-group application (substitute + reduce).
  Word apply(const Word& w) const;
  Word apply_inverse(const Word& w) const;  // throws capability_error if no bwd

  static Automorphism identity(int rank);
  // lambda_g : x -> g^-1 x g
  static Automorphism inner(const Word& g, int rank);
};

// Substitute every generator by its image, no group-specific rewriting
// beyond free reduction.
Word substitute(const std::vector<Word>& images, const Word& w);

// apply a, then b.
Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism power(const Automorphism& a, long long k);
Automorphism inverse(const Automorphism& a);

// Both compositions fix every generator (free-group check).
bool verify_automorphism(const Automorphism& a);

// Witness that phi^p is the inner automorphism lambda_delta.
struct ViaCertificate {
  long long p = 1;
  Word delta;
};

bool verify_via_certificate(const Automorphism& phi, const ViaCertificate& c);

// phi-TCC(g) = g * (phi lambda_g)-TCC(1): returns (phi * lambda_g, g^-1 y).
std::pair<Automorphism, Word> twist_normalize(const Automorphism& phi, const Word& g,
                                              const Word& y);

// Row i = abelianization of the image of generator i.
std::vector<std::vector<long long>> abelianization_matrix(const Automorphism& a);

// Certificate for phi * lambda_u given one for phi: (phi lambda_u)^p =
// lambda_{delta * u_p} with u_p = (u phi^{p-1})...(u phi) u.
ViaCertificate via_certificate_for_twist(const Automorphism& phi, const ViaCertificate& c,
                                         const Word& u);
// Certificate for the inverse automorphism: (p, delta^-1) pushed through.
ViaCertificate via_certificate_for_inverse(const Automorphism& phi, const ViaCertificate& c);

}  // namespace conjsep
