// context.hpp -- uniform view of the ambient groups the engine decides in:
// normal forms, deterministic element enumeration, presentations for the
// quotient search, and automorphism application by substitution.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "conjsep/automorphism.hpp"
#include "conjsep/extensions.hpp"
#include "conjsep/quotients.hpp"
#include "conjsep/word.hpp"

namespace conjsep {

class GroupContext {
 public:
  virtual ~GroupContext() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual Word normal_form(const Word& w) const = 0;
  virtual Presentation presentation() const = 0;
  // Normal forms of all elements of word length <= len: deterministic,
  // shortlex by normal form, deduped, stable under growing len.
  virtual std::vector<Word> elements_of_length(int len) const = 0;
  virtual std::string describe() const = 0;

  Word multiply(const Word& a, const Word& b) const { return normal_form(a * b); }
  Word invert(const Word& a) const { return normal_form(a.inverse()); }
  Word apply(const Automorphism& phi, const Word& w) const {
    return normal_form(substitute(phi.fwd, w));
  }
  Word apply_inverse(const Automorphism& phi, const Word& w) const {
    if (!phi.has_inverse()) throw capability_error("automorphism has no backward map");
    return normal_form(substitute(phi.bwd, w));
  }
  // Both compositions fix the generators modulo the group's relations.
  bool verify_automorphism_in_context(const Automorphism& phi) const;
};

using ContextPtr = std::shared_ptr<const GroupContext>;

ContextPtr make_free_context(int rank);
ContextPtr make_semidirect_context(Automorphism phi);          // alphabet: fiber + t
ContextPtr make_gphi_context(GPhi e);                          // alphabet: fiber + t
ContextPtr make_fatf_context(int rank, int dim);               // fiber letters, then Z letters
ContextPtr make_extension_context(ExtensionDatum d);           // fiber + b_2..b_m

// Accessors for the engine's structure-specific fast paths; null when the
// context is not of that shape.
const Automorphism* semidirect_fiber_aut(const GroupContext& c);
const GPhi* gphi_data(const GroupContext& c);
const ExtensionDatum* extension_data(const GroupContext& c);
struct FatfShape {
  int rank = 0;
  int dim = 0;
};
const FatfShape* fatf_shape(const GroupContext& c);
int free_rank(const GroupContext& c);  // -1 if not free

// Split a semidirect/gphi/fatf normal form into its t part and fiber part.
SdElement sd_split(const GroupContext& c, const Word& nf);

}  // namespace conjsep
