#include "conjsep/automorphism.hpp"

namespace conjsep {

Word substitute(const std::vector<Word>& images, const Word& w) {
  Word out;
  for (Letter l : w.letters()) {
    const Word& img = images[static_cast<size_t>(gen_of(l))];
    out = out * (is_positive(l) ? img : img.inverse());
  }
  return out;
}

Word Automorphism::apply(const Word& w) const { return substitute(fwd, w); }

Word Automorphism::apply_inverse(const Word& w) const {
  if (!has_inverse()) throw capability_error("automorphism has no backward map");
  return substitute(bwd, w);
}

Automorphism Automorphism::identity(int rank) {
  Automorphism a;
  for (int i = 0; i < rank; ++i) {
    a.fwd.push_back(Word({i + 1}));
    a.bwd.push_back(Word({i + 1}));
  }
  return a;
}

Automorphism Automorphism::inner(const Word& g, int rank) {
  Automorphism a;
  for (int i = 0; i < rank; ++i) {
    a.fwd.push_back(Word({i + 1}).conjugated_by(g));
    a.bwd.push_back(Word({i + 1}).conjugated_by(g.inverse()));
  }
  return a;
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  for (const Word& w : a.fwd) c.fwd.push_back(b.apply(w));
  if (a.has_inverse() && b.has_inverse())
    for (const Word& w : b.bwd) c.bwd.push_back(a.apply_inverse(w));
  return c;
}

Automorphism inverse(const Automorphism& a) {
  if (!a.has_inverse()) throw capability_error("automorphism has no backward map");
  Automorphism b;
  b.fwd = a.bwd;
  b.bwd = a.fwd;
  return b;
}

Automorphism power(const Automorphism& a, long long k) {
  const int r = a.rank();
  Automorphism base = k >= 0 ? a : inverse(a);
  long long n = k >= 0 ? k : -k;
  Automorphism acc = Automorphism::identity(r);
  for (long long i = 0; i < n; ++i) acc = compose(acc, base);
  return acc;
}

bool verify_automorphism(const Automorphism& a) {
  if (!a.has_inverse()) return false;
  if (a.bwd.size() != a.fwd.size()) return false;
  for (int i = 0; i < a.rank(); ++i) {
    const Word gen({i + 1});
    if (a.apply_inverse(a.apply(gen)) != gen) return false;
    if (a.apply(a.apply_inverse(gen)) != gen) return false;
  }
  return true;
}

bool verify_via_certificate(const Automorphism& phi, const ViaCertificate& c) {
  if (c.p < 1) return false;
  const Automorphism p = power(phi, c.p);
  for (int i = 0; i < phi.rank(); ++i) {
    const Word gen({i + 1});
    if (p.apply(gen) != gen.conjugated_by(c.delta)) return false;
  }
  return true;
}

std::pair<Automorphism, Word> twist_normalize(const Automorphism& phi, const Word& g,
                                              const Word& y) {
  return {compose(phi, Automorphism::inner(g, phi.rank())), g.inverse() * y};
}

std::vector<std::vector<long long>> abelianization_matrix(const Automorphism& a) {
  std::vector<std::vector<long long>> m;
  m.reserve(a.fwd.size());
  for (const Word& w : a.fwd) m.push_back(abelianize(w, a.rank()));
  return m;
}

ViaCertificate via_certificate_for_twist(const Automorphism& phi, const ViaCertificate& c,
                                         const Word& u) {
  // (phi lambda_u)^p = phi^p lambda_{u_p}, u_p = (u phi^{p-1}) ... (u phi) u.
  Word up;
  for (long long i = c.p - 1; i >= 0; --i) up = up * power(phi, i).apply(u);
  return {c.p, c.delta * up};
}

ViaCertificate via_certificate_for_inverse(const Automorphism&, const ViaCertificate& c) {
  return {c.p, c.delta.inverse()};
}

}  // namespace conjsep
