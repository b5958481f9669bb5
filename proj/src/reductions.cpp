#include "conjsep/reductions.hpp"

namespace conjsep {

Nfa setspec_to_nfa(const SetSpec& s, int alphabet_rank) {
  switch (s.tag) {
    case SetSpec::Tag::Fin:
      return nfa_from_words(alphabet_rank, s.fin);
    case SetSpec::Tag::Coset:
      return nfa_coset(alphabet_rank, s.coset.gens, s.coset.rep);
    case SetSpec::Tag::Rat:
      return s.rat;
  }
  return {};
}

RationalDecomposition decompose_over_extension(const Nfa& k_ext, const ExtensionDatum& d) {
  const int m = d.m;
  const int n_states = k_ext.states;
  // Per (coset, letter): the fiber contribution and the new coset.
  struct Step {
    Word w;
    int coset;
  };
  const int rank_ext = ext_alphabet_rank(d);
  std::vector<std::vector<Step>> table(static_cast<size_t>(m),
                                       std::vector<Step>(static_cast<size_t>(2 * rank_ext)));
  for (int i = 1; i <= m; ++i) {
    for (int k = 0; k < 2 * rank_ext; ++k) {
      const Letter l = letter_at_order(k);
      const ExtElement e = ext_evaluate(d, Word({l}));
      // (u, i)(v, j) = (u * (v phi_i^-1) * nu(i,j), sigma(i,j))
      Step st;
      st.w = d.phis[static_cast<size_t>(i - 1)].apply_inverse(e.u) *
             d.nu[static_cast<size_t>(i - 1)][static_cast<size_t>(e.coset - 1)];
      st.coset = d.sigma[static_cast<size_t>(i - 1)][static_cast<size_t>(e.coset - 1)];
      table[static_cast<size_t>(i - 1)][static_cast<size_t>(k)] = std::move(st);
    }
  }

  Nfa prod;
  prod.rank = d.fiber_rank;
  prod.states = n_states * m;
  auto id = [&](int q, int i) { return q * m + (i - 1); };
  for (int q0 : k_ext.initial) prod.initial.push_back(id(q0, 1));
  for (auto [src, l, dst] : k_ext.trans) {
    for (int i = 1; i <= m; ++i) {
      if (l == 0) {
        prod.trans.emplace_back(id(src, i), 0, id(dst, i));
        continue;
      }
      const Step& st = table[static_cast<size_t>(i - 1)][static_cast<size_t>(letter_order(l))];
      const int from = id(src, i);
      const int to = id(dst, st.coset);
      if (st.w.empty()) {
        prod.trans.emplace_back(from, 0, to);
      } else {
        int cur = from;
        for (int p = 0; p < st.w.size(); ++p) {
          const int nxt = (p == st.w.size() - 1) ? to : prod.states++;
          prod.trans.emplace_back(cur, st.w.at(p), nxt);
          cur = nxt;
        }
      }
    }
  }
  RationalDecomposition out;
  for (int i = 1; i <= m; ++i) {
    Nfa piece = prod;
    piece.finals.clear();
    for (int f : k_ext.finals) piece.finals.push_back(id(f, i));
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

SdReduction semidirect_conjugacy_instance(const SdElement& x, const SdElement& y) {
  SdReduction r;
  if (x.t != y.t) {
    r.kind = SdInstanceKind::No;
    return r;
  }
  r.x = x.g;
  r.y = y.g;
  if (x.t == 0) {
    r.kind = SdInstanceKind::BrinkmannConj;
  } else if (x.t == 1) {
    r.kind = SdInstanceKind::Twisted;
  } else {
    r.kind = SdInstanceKind::Generic;
  }
  return r;
}

GphiConjInstance twisted_to_gphi(const Automorphism& phi, const ViaCertificate& cert,
                                 const SetSpec& K, const Word& y) {
  if (!verify_via_certificate(phi, cert)) throw input_error("via certificate does not verify");
  const int rank = phi.rank();
  const Letter t = rank + 1;
  GphiConjInstance inst;
  inst.gphi = GPhi{phi, cert.p, cert.delta};
  inst.target = Word({-t}) * phi.apply_inverse(y);
  switch (K.tag) {
    case SetSpec::Tag::Fin: {
      std::vector<Word> ws;
      for (const Word& k : K.fin) ws.push_back(Word({-t}) * phi.apply_inverse(k));
      inst.set = SetSpec::finite(std::move(ws));
      break;
    }
    case SetSpec::Tag::Coset: {
      // t^-1 (H phi^-1)(x phi^-1) = H * (t^-1 (x phi^-1)): conjugating the
      // mapped subgroup through t brings back the original generators.
      inst.set =
          SetSpec::coset_of(K.coset.gens, Word({-t}) * phi.apply_inverse(K.coset.rep));
      break;
    }
    case SetSpec::Tag::Rat: {
      Nfa mapped = nfa_substitute(K.rat, rank, [&](Letter l) { return phi.apply_inverse(Word({l})); });
      Nfa shifted = nfa_translate(mapped, Word({-t}), /*left=*/true);
      shifted.rank = rank + 1;
      inst.set = SetSpec::rational(std::move(shifted));
      break;
    }
  }
  return inst;
}

Word gphi_witness_to_twisted(const Automorphism& phi, const Word& k, long long n, const Word& x) {
  const Word z = phi.apply_inverse(x);
  Word u;
  if (n >= 0) {
    for (long long i = 0; i < n; ++i) u = u * power(phi, i).apply(k.inverse());
  } else {
    for (long long i = 1; i <= -n; ++i) u = u * power(phi, -i).apply(k);
  }
  return u * z;
}

std::vector<ExtSubinstance> extension_conjugacy_decompose(const ExtensionDatum& d,
                                                          const RationalDecomposition& pieces,
                                                          const ExtElement& target) {
  std::vector<ExtSubinstance> out;
  if (static_cast<int>(pieces.pieces.size()) != d.m)
    throw input_error("decomposition piece count does not match the datum");
  for (int j = 1; j <= d.m; ++j) {
    const ViaCertificate cj = datum_via_certificate(d, j);
    for (int k = 1; k <= d.m; ++k) {
      const ExtElement rep = datum_conjugated_rep(d, k, j);
      if (rep.coset != target.coset) continue;  // k not in beta_{i,j}
      ExtSubinstance s;
      s.j = j;
      s.k = k;
      s.aut = inverse(d.phis[static_cast<size_t>(j - 1)]);
      s.via = via_certificate_for_inverse(d.phis[static_cast<size_t>(j - 1)], cj);
      s.target = d.phis[static_cast<size_t>(k - 1)].apply(target.u * rep.u.inverse());
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace conjsep
