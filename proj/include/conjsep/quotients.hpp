// quotients.hpp -- homomorphisms onto finite permutation groups:
// enumeration, induced automorphisms on quotients, finite images of the
// conjugacy-type set operators, and separating certificates.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conjsep/automorphism.hpp"
#include "conjsep/perm.hpp"
#include "conjsep/setspec.hpp"
#include "conjsep/stallings.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

struct Presentation {
  Alphabet alphabet;
  std::vector<Word> relators;  // empty <=> free group

  std::string key() const;  // canonical serialization for caching
};

struct FiniteHom {
  int degree = 1;
  std::vector<Perm> images;  // one per generator

  Perm apply(const Word& w) const;
  bool satisfies(const std::vector<Word>& relators) const;
  // Order of the image subgroup, capped (returns cap+1 when exceeded).
  long long image_order(long long cap) const;
};

// Streams every generator assignment into Sym(degree) that satisfies the
// relators, in lexicographic order of permutation tuples.
class HomEnumerator {
 public:
  HomEnumerator(Presentation p, int degree);
  std::optional<FiniteHom> next();

 private:
  bool partial_ok(int depth) const;
  FiniteHom make_current() const;

  Presentation pres_;
  int degree_;
  std::vector<Perm> perms_;              // all of Sym(degree), lex order
  std::vector<int> idx_;                 // odometer over perms_
  std::vector<std::vector<int>> check_;  // relators checkable at each depth
  bool done_ = false;
  bool first_ = true;
};

std::vector<FiniteHom> enumerate_all_homs(const Presentation& p, int degree);

// Subgroup of Sym(k) generated by `gens`, BFS order from the identity;
// stops (returns empty) if the size would exceed `cap`.
std::vector<Perm> subgroup_elements(const std::vector<Perm>& gens, long long cap);

// The automorphism induced on the image of psi by a_i psi -> (a_i phi) psi,
// when well defined and bijective.
struct InducedAut {
  std::vector<Perm> elements;  // image subgroup, BFS order
  std::vector<int> phibar;     // index map on `elements`
  int find(const Perm& p) const;
  Perm apply(const Perm& p) const;
};
std::optional<InducedAut> induced_automorphism(const FiniteHom& psi, const Automorphism& phi);

enum class SetKind { Alpha, Tcc, Bcc, Orbit };
std::string set_kind_name(SetKind k);
SetKind set_kind_from_name(const std::string& s);

// Exact image of the kind-set of K under h, computed inside the finite
// group by fixpoint closure. Orbit and Bcc iterate the induced
// automorphism and need it; Tcc closes under the generator pairs
// ((a phi) h, a h), which is exact without an induced map. The optional
// constraint restricts twisted conjugators to a coset (Tcc only).
std::vector<Perm> image_of_set(const FiniteHom& h, const InducedAut* phibar, SetKind kind,
                               const SetSpec& K, const Automorphism* phi,
                               const CosetSpec* twist_constraint = nullptr);

// A verifiable NO certificate: a finite quotient under which the target's
// image misses the image of the kind-set.
struct SeparatingCertificate {
  std::string context_desc;
  Presentation pres;
  FiniteHom hom;
  std::optional<Automorphism> aut;          // for twisted kinds
  SetKind kind = SetKind::Alpha;
  SetSpec set;
  std::optional<CosetSpec> twist_constraint;  // conjugators restricted to a coset
  Word excluded;
  std::vector<Perm> image_audit;  // the full finite image set

  std::string to_json() const;
  static SeparatingCertificate from_json(const std::string& text);
};

// Recomputes everything from scratch: relators hold, the induced
// automorphism exists when needed, the image set matches the audit copy,
// and the excluded element's image avoids it.
bool verify_separation(const SeparatingCertificate& c);

// Fully invariant core: intersection of the kernels of all homomorphisms
// onto groups of order <= max_order.
struct CoreResult {
  StallingsGraph graph;
  StallingsGraph::Transversal transversal;
};
CoreResult fully_invariant_core(int rank, int max_order, long long state_budget = 100000);

// Same computation for a presented group, as the joint homomorphism into
// the direct product of all such quotients (acting on disjoint points).
FiniteHom fully_invariant_core_hom(const Presentation& p, int max_order, int degree_budget);

// Refine psi to a hom whose kernel is fully invariant, so the induced
// automorphism always exists. May return psi itself when it is already
// compatible. Throws resource_error past the budgets.
std::pair<FiniteHom, InducedAut> invariant_refine(const Presentation& p, const FiniteHom& psi,
                                                  const Automorphism& phi, int degree_budget);

// Shared, memoized hom enumeration (presentation key x degree).
class HomCache {
 public:
  const std::vector<FiniteHom>& homs(const Presentation& p, int degree);

 private:
  std::map<std::pair<std::string, int>, std::vector<FiniteHom>> cache_;
};

}  // namespace conjsep
