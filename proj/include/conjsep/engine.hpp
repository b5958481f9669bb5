// engine.hpp -- the generic two-strand semi-decision procedure: fair
// alternation between witness enumeration over dovetailed axes and
// separating-quotient search, with certified verdicts. Structure-specific
// exact reductions run first and return verdicts of the same type.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conjsep/context.hpp"
#include "conjsep/exact_solvers.hpp"
#include "conjsep/intmat.hpp"
#include "conjsep/quotients.hpp"
#include "conjsep/setspec.hpp"

namespace conjsep {

enum class Kind { Conj, Twisted, BrinkOrbit, BrinkConj };
std::string kind_name(Kind k);

struct Budget {
  int max_len = 12;
  int max_degree = 5;
  long long max_steps = 200000;
};

struct DecisionInstance {
  ContextPtr ctx;
  Kind kind = Kind::Conj;
  std::optional<Automorphism> aut;     // over the context alphabet
  std::optional<ViaCertificate> via;   // verified in context when present
  SetSpec set;                         // over the context alphabet
  Word target;                         // over the context alphabet
  std::optional<CosetSpec> conjugator_constraint;  // twisted kind only
};

enum class Answer { Yes, No, Undecided };
std::string answer_name(Answer a);

struct Witness {
  Word member;      // element of K (normal form in context)
  Word conjugator;  // empty for orbit kind
  long long exponent = 0;
};

// NO certificate for the Z^m lattice fast path.
struct LatticeNoCert {
  IMat rows;
  IVec target;
  LatticeSeparator sep;
};

// NO certificate for Z^m orbits: one modulus per set member.
struct OrbitNoCert {
  std::vector<long long> moduli;
};

struct EffortReport {
  long long members_tested = 0;
  long long homs_tested = 0;
  int max_len_reached = 0;
  int max_degree_reached = 0;
  std::string note;
};

struct Verdict {
  Answer answer = Answer::Undecided;
  std::optional<Witness> witness;
  std::optional<SeparatingCertificate> certificate;
  std::optional<LatticeNoCert> lattice_no;
  std::optional<OrbitNoCert> orbit_no;
  EffortReport effort;
};

struct DecideOptions {
  bool no_fast_path = false;
  bool parallel = false;
  HomCache* cache = nullptr;  // optional shared hom cache
};

Verdict decide(const DecisionInstance& inst, const Budget& b, const DecideOptions& opts = {});

// YES: re-multiply the witness in the context; NO: re-check the
// certificate; UNDECIDED: vacuously true.
bool verify(const Verdict& v, const DecisionInstance& inst);

// Deterministic member enumeration (the recursively enumerable strand),
// exposed for tests: all kind-set members with witnesses found within the
// given axis levels.
std::vector<std::pair<Word, Witness>> enumerate_members(const DecisionInstance& inst,
                                                        int max_level, long long max_items);

// The quotient strand, exposed for tests: all separating certificates
// found up to the degree bound (at most max_items).
std::vector<SeparatingCertificate> search_separator(const DecisionInstance& inst, int max_degree,
                                                    long long max_items,
                                                    HomCache* cache = nullptr);

}  // namespace conjsep
