#include "conjsep/setspec.hpp"

#include <algorithm>
#include <sstream>

namespace conjsep {

SetSpec SetSpec::finite(std::vector<Word> ws) {
  SetSpec s;
  s.tag = Tag::Fin;
  s.fin = std::move(ws);
  return s;
}

SetSpec SetSpec::coset_of(std::vector<Word> gens, Word rep) {
  SetSpec s;
  s.tag = Tag::Coset;
  s.coset.gens = std::move(gens);
  s.coset.rep = std::move(rep);
  return s;
}

SetSpec SetSpec::rational(Nfa a) {
  SetSpec s;
  s.tag = Tag::Rat;
  s.rat = std::move(a);
  return s;
}

bool SetSpec::free_contains(const Word& w, int rank) const {
  switch (tag) {
    case Tag::Fin:
      return std::find(fin.begin(), fin.end(), w) != fin.end();
    case Tag::Coset: {
      const auto g = StallingsGraph::fold(rank, coset.gens);
      return g.contains(w * coset.rep.inverse());
    }
    case Tag::Rat:
      return rational_member(rat, w);
  }
  return false;
}

SetSpec SetSpec::mapped(const Automorphism& phi, bool use_inverse, int rank) const {
  auto ap = [&](const Word& w) { return use_inverse ? phi.apply_inverse(w) : phi.apply(w); };
  switch (tag) {
    case Tag::Fin: {
      std::vector<Word> out;
      out.reserve(fin.size());
      for (const Word& w : fin) out.push_back(ap(w));
      return finite(std::move(out));
    }
    case Tag::Coset: {
      std::vector<Word> gens;
      gens.reserve(coset.gens.size());
      for (const Word& w : coset.gens) gens.push_back(ap(w));
      return coset_of(std::move(gens), ap(coset.rep));
    }
    case Tag::Rat: {
      return rational(nfa_substitute(rat, rank, [&](Letter l) { return ap(Word({l})); }));
    }
  }
  return *this;
}

std::string SetSpec::describe(const Alphabet& a) const {
  std::ostringstream os;
  switch (tag) {
    case Tag::Fin: {
      os << "fin ";
      for (size_t i = 0; i < fin.size(); ++i) os << (i ? "," : "") << fin[i].str(a);
      break;
    }
    case Tag::Coset: {
      os << "coset gens ";
      for (size_t i = 0; i < coset.gens.size(); ++i) os << (i ? "," : "") << coset.gens[i].str(a);
      os << " rep " << coset.rep.str(a);
      break;
    }
    case Tag::Rat:
      os << "rat states=" << rat.states << " trans=" << rat.trans.size();
      break;
  }
  return os.str();
}

}  // namespace conjsep
