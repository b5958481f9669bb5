// exact_solvers.hpp -- closed-form and reduction-based deciders: twisted
// conjugacy and orbits in Z^m, the automorphism calculus of free-abelian
// times free groups with the virtually-inner criterion, the type VI/VII
// reduction for products of two free groups, the finite-union reduction of
// Brinkmann conjugacy for virtually inner automorphisms, and the separator
// homomorphisms for F_n x Z.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conjsep/automorphism.hpp"
#include "conjsep/intmat.hpp"
#include "conjsep/setspec.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

// --- Z^m ------------------------------------------------------------------

struct ZmAutomorphism {
  IMat M;  // unimodular, acting on row vectors
};

struct ZmCoset {
  IMat basis;  // generators of H (rows)
  IVec x;      // translate: the set is H + x
};

struct ZmTccResult {
  bool member = false;
  // member: y - x = z (I - M) + h with h the basis combination.
  IVec twist_z;
  IVec basis_coeffs;
  // non-member: residue certificate.
  LatticeSeparator certificate;
};
// y in phi-TCC(Hx) iff y - x lies in the lattice spanned by H and the rows
// of I - M.
ZmTccResult zm_tcc_member(const ZmAutomorphism& a, const ZmCoset& c, const IVec& y);
bool verify_zm_tcc(const ZmAutomorphism& a, const ZmCoset& c, const IVec& y,
                   const ZmTccResult& r);

enum class SolverStatus { Yes, No, Undecided };

struct ZmOrbitResult {
  SolverStatus status = SolverStatus::Undecided;
  long long k = 0;        // Yes: x M^k == y
  long long modulus = 0;  // No: orbit of x mod modulus avoids y mod modulus
};
ZmOrbitResult zm_orbit_member(const IMat& M, const IVec& x, const IVec& y, long long step_budget,
                              long long modulus_budget);
bool verify_zm_orbit(const IMat& M, const IVec& x, const IVec& y, const ZmOrbitResult& r);

// --- free-abelian times free -----------------------------------------------

// t^a u -> t^{aQ + abel(u) P} (u phi)
struct FatfAutomorphism {
  Automorphism phi;  // of F_n
  IMat Q;            // m x m, unimodular
  IMat P;            // n x m
};

struct FatfElement {
  IVec t;  // length m
  Word u;
  bool operator==(const FatfElement&) const = default;
};

FatfElement fatf_apply(const FatfAutomorphism& a, const FatfElement& e);
FatfElement fatf_multiply(const FatfElement& x, const FatfElement& y);
FatfAutomorphism fatf_compose(const FatfAutomorphism& a, const FatfAutomorphism& b);
// Power by the closed form P^(k) = sum_i Phi^{i-1} P Q^{k-i}.
FatfAutomorphism fatf_power(const FatfAutomorphism& a, long long k);

struct FatfViaResult {
  SolverStatus status = SolverStatus::Undecided;
  long long k = 0;  // Yes: the witnessing exponent
  std::string reason;
};
// Virtually-inner test: Q must have finite order and some k in o(phi)N must
// zero the matrix sum P^(k). Exact for small dimensions; NO answers carry
// a certified reason.
FatfViaResult fatf_via_test(const FatfAutomorphism& a, const ViaCertificate& phi_cert,
                            long long k_bound);

// --- F_n x F_m ---------------------------------------------------------------

// type VI: (x,y) -> (x phi, y psi); type VII: (x,y) -> (y psi, x phi).
struct FnFmAutomorphism {
  bool type7 = false;
  Automorphism phi;  // acts on the first factor's rank
  Automorphism psi;
};

struct FreeTwistedInstance {
  Automorphism aut;
  Word target;  // membership of target in aut-TCC(1)
};

// Instances whose conjunction answers "(x,y) in Psi-TCC((z,w))".
std::vector<FreeTwistedInstance> fnfm_twisted_reduce(const FnFmAutomorphism& a, const Word& x,
                                                     const Word& y, const Word& z, const Word& w);

// Brute-force oracle used by the tests: some (u,v) with |u|,|v| <= bound
// satisfies ((u,v)^-1 Psi)(z,w)(u,v) == (x,y).
bool fnfm_twisted_direct(const FnFmAutomorphism& a, const Word& x, const Word& y, const Word& z,
                         const Word& w, int bound);

// --- via-Brinkmann and the F_n x Z separators -------------------------------

// BCC(x) = union of alpha(x phi^i), i = 1..p.
std::vector<Word> via_brinkmann_targets(const Automorphism& phi, const ViaCertificate& c,
                                        const Word& x);

// Orientation-preserving separator: t^a u -> -k a - sum_{i<k} (k-i) *
// abel(u phi^{i-1}) . P. Kills Psi-TCC(1) and evaluates to -k(q + abel(y).P)
// on t^q (y^-1 phi) y.
struct ZetaPreserving {
  long long k = 0;
  IVec P;  // n x 1 column as a vector
  Automorphism phi;
  long long eval(const FatfElement& e) const;
};

// Orientation-reversing case: the mod-2 coordinate splitting by
// H = { u : abel(u) . P even }.
struct ZetaReversing {
  IVec P;
  bool in_H(const Word& u) const;
  int mod2_coordinate(const FatfElement& e) const;  // t-exponent mod 2
};

struct ZetaDeclined {
  std::string reason;
};

using ZetaSeparator = std::variant<ZetaPreserving, ZetaReversing, ZetaDeclined>;
// `preserving` selects the case; k and P come from the via analysis.
ZetaSeparator fnxz_zeta_separator(bool preserving, long long k, const IVec& P,
                                  const Automorphism& phi, int verify_len);

}  // namespace conjsep
