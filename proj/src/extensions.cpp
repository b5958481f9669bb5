#include "conjsep/extensions.hpp"

#include <sstream>

namespace conjsep {

SdElement sd_multiply(const Automorphism& phi, const SdElement& x, const SdElement& y) {
  // (t^a g)(t^b h) = t^{a+b} (g phi^b) h
  SdElement r;
  r.t = x.t + y.t;
  r.g = power(phi, y.t).apply(x.g) * y.g;
  return r;
}

SdElement sd_invert(const Automorphism& phi, const SdElement& x) {
  // (t^a g)^-1 = t^-a (g^-1 phi^-a)
  SdElement r;
  r.t = -x.t;
  r.g = power(phi, -x.t).apply(x.g.inverse());
  return r;
}

GPhiElement gphi_normalize(const GPhi& e, long long k, const Word& g) {
  if (e.p < 1) throw input_error("G^phi needs p >= 1");
  // k = r p + s with 0 <= s < p; t^k = t^s Delta^r, so t^k g = t^s (Delta^r g).
  long long r = k / e.p;
  long long s = k % e.p;
  if (s < 0) {
    s += e.p;
    r -= 1;
  }
  GPhiElement out;
  out.k = s;
  out.g = e.delta.pow(r) * g;
  return out;
}

GPhiElement gphi_multiply(const GPhi& e, const GPhiElement& x, const GPhiElement& y) {
  // t^k g t^l h = t^{k+l} (g phi^l) h, then reduce the exponent.
  return gphi_normalize(e, x.k + y.k, power(e.phi, y.k).apply(x.g) * y.g);
}

GPhiElement gphi_invert(const GPhi& e, const GPhiElement& x) {
  return gphi_normalize(e, -x.k, power(e.phi, -x.k).apply(x.g.inverse()));
}

std::optional<std::string> validate_extension_datum(const ExtensionDatum& d) {
  const int m = d.m;
  if (m < 1) return "m must be >= 1";
  if (static_cast<int>(d.phis.size()) != m || static_cast<int>(d.nu.size()) != m ||
      static_cast<int>(d.sigma.size()) != m)
    return "phi/nu/sigma tables must have m rows";
  for (int i = 0; i < m; ++i)
    if (static_cast<int>(d.nu[static_cast<size_t>(i)].size()) != m ||
        static_cast<int>(d.sigma[static_cast<size_t>(i)].size()) != m)
      return "nu/sigma tables must be m x m";
  for (int i = 0; i < m; ++i) {
    if (d.phis[static_cast<size_t>(i)].rank() != d.fiber_rank) return "phi rank mismatch";
    if (!verify_automorphism(d.phis[static_cast<size_t>(i)]))
      return "phi_" + std::to_string(i + 1) + " is not a verified automorphism";
  }
  for (int i = 0; i < d.fiber_rank; ++i) {
    const Word gen({i + 1});
    if (d.phis[0].apply(gen) != gen) return "phi_1 must be the identity";
  }
  for (int j = 0; j < m; ++j) {
    if (d.sigma[0][static_cast<size_t>(j)] != j + 1) return "sigma(1,j) must equal j";
    if (d.sigma[static_cast<size_t>(j)][0] != j + 1) return "sigma(i,1) must equal i";
    if (!d.nu[0][static_cast<size_t>(j)].empty() || !d.nu[static_cast<size_t>(j)][0].empty())
      return "nu must be trivial on the identity row and column";
  }
  // Rows and columns of sigma must be permutations of [m] (group translation).
  for (int i = 0; i < m; ++i) {
    std::vector<bool> row(static_cast<size_t>(m), false), col(static_cast<size_t>(m), false);
    for (int j = 0; j < m; ++j) {
      const int r = d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)];
      const int c = d.sigma[static_cast<size_t>(j)][static_cast<size_t>(i)];
      if (r < 1 || r > m || c < 1 || c > m) return "sigma entry out of range";
      if (row[static_cast<size_t>(r - 1)]) return "sigma row is not a permutation";
      if (col[static_cast<size_t>(c - 1)]) return "sigma column is not a permutation";
      row[static_cast<size_t>(r - 1)] = true;
      col[static_cast<size_t>(c - 1)] = true;
    }
  }
  // Cocycle identity on every pair and every fiber generator:
  // (x phi_i) phi_j = (x lambda_{nu(i,j)}) phi_{sigma(i,j)}.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Word& v = d.nu[static_cast<size_t>(i)][static_cast<size_t>(j)];
      const int s = d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] - 1;
      for (int g = 0; g < d.fiber_rank; ++g) {
        const Word gen({g + 1});
        const Word lhs = d.phis[static_cast<size_t>(j)].apply(d.phis[static_cast<size_t>(i)].apply(gen));
        const Word rhs = d.phis[static_cast<size_t>(s)].apply(gen.conjugated_by(v));
        if (lhs != rhs)
          return "cocycle identity fails at (i=" + std::to_string(i + 1) +
                 ",j=" + std::to_string(j + 1) + ",gen=" + std::to_string(g + 1) + ")";
      }
    }
  // Associativity of the transversal multiplication (sigma and the
  // nu-level 2-cocycle condition) on every triple.
  auto sig = [&](int i, int j) { return d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] - 1; };
  auto nuw = [&](int i, int j) -> const Word& {
    return d.nu[static_cast<size_t>(i)][static_cast<size_t>(j)];
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        if (sig(sig(i, j), k) != sig(i, sig(j, k)))
          return "sigma is not associative at (" + std::to_string(i + 1) + "," +
                 std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
        const Word lhs = nuw(i, j) * nuw(sig(i, j), k);
        const Word rhs = d.phis[static_cast<size_t>(i)].apply_inverse(nuw(j, k)) * nuw(i, sig(j, k));
        if (lhs != rhs)
          return "nu cocycle condition fails at (" + std::to_string(i + 1) + "," +
                 std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
      }
  return std::nullopt;
}

ExtElement ext_multiply(const ExtensionDatum& d, const ExtElement& x, const ExtElement& y) {
  // (u b_i)(v b_j) = u (v phi_i^-1) nu(i,j) b_{sigma(i,j)}
  ExtElement r;
  const size_t i = static_cast<size_t>(x.coset - 1), j = static_cast<size_t>(y.coset - 1);
  r.u = x.u * d.phis[i].apply_inverse(y.u) * d.nu[i][j];
  r.coset = d.sigma[i][j];
  return r;
}

int ext_inverse_coset(const ExtensionDatum& d, int i) {
  for (int j = 1; j <= d.m; ++j)
    if (d.sigma[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] == 1) return j;
  throw input_error("sigma has no inverse coset; datum invalid");
}

ExtElement ext_invert(const ExtensionDatum& d, const ExtElement& x) {
  // Solve (u b_i)(v b_j) = b_1: j with sigma(i,j) = 1 and
  // v = (u^-1 nu(i,j)^-1) phi_i.
  const int j = ext_inverse_coset(d, x.coset);
  ExtElement r;
  r.coset = j;
  const Word& nu = d.nu[static_cast<size_t>(x.coset - 1)][static_cast<size_t>(j - 1)];
  r.u = d.phis[static_cast<size_t>(x.coset - 1)].apply(x.u.inverse() * nu.inverse());
  return r;
}

int ext_alphabet_rank(const ExtensionDatum& d) { return d.fiber_rank + d.m - 1; }

ExtElement ext_evaluate(const ExtensionDatum& d, const Word& w) {
  ExtElement acc;  // identity
  for (Letter l : w.letters()) {
    const int g = gen_of(l);
    ExtElement step;
    if (g < d.fiber_rank) {
      step.u = Word({is_positive(l) ? g + 1 : -(g + 1)});
      step.coset = 1;
    } else {
      step.u = Word();
      step.coset = g - d.fiber_rank + 2;
      if (step.coset > d.m) throw input_error("letter outside the extension alphabet");
      if (!is_positive(l)) step = ext_invert(d, step);
    }
    acc = ext_multiply(d, acc, step);
  }
  return acc;
}

Word ext_to_word(const ExtensionDatum& d, const ExtElement& x) {
  Word w = x.u;
  if (x.coset != 1) w = w * Word({d.fiber_rank + x.coset - 1});
  return w;
}

ExtensionDatum split_extension_datum(const Automorphism& s, int order) {
  ExtensionDatum d;
  d.fiber_rank = s.rank();
  d.m = order;
  for (int i = 0; i < order; ++i) d.phis.push_back(power(s, i));
  d.nu.assign(static_cast<size_t>(order), std::vector<Word>(static_cast<size_t>(order)));
  d.sigma.assign(static_cast<size_t>(order), std::vector<int>(static_cast<size_t>(order)));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % order + 1;
  return d;
}

ExtensionDatum gphi_extension_datum(const GPhi& e) {
  // b_i = t^{i-1}; b_i b_j = t^{i+j-2} = (Delta phi^{-s}) t^s when the
  // exponent wraps past p.
  ExtensionDatum d;
  d.fiber_rank = e.phi.rank();
  d.m = static_cast<int>(e.p);
  for (long long i = 0; i < e.p; ++i) d.phis.push_back(power(e.phi, i));
  d.nu.assign(static_cast<size_t>(e.p), std::vector<Word>(static_cast<size_t>(e.p)));
  d.sigma.assign(static_cast<size_t>(e.p), std::vector<int>(static_cast<size_t>(e.p)));
  for (long long i = 0; i < e.p; ++i)
    for (long long j = 0; j < e.p; ++j) {
      const long long k = i + j;
      if (k < e.p) {
        d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<int>(k) + 1;
      } else {
        const long long s = k - e.p;
        d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<int>(s) + 1;
        d.nu[static_cast<size_t>(i)][static_cast<size_t>(j)] = power(e.phi, -s).apply(e.delta);
      }
    }
  return d;
}

ViaCertificate datum_via_certificate(const ExtensionDatum& d, int j) {
  ExtElement b;
  b.coset = j;
  ExtElement acc = b;
  long long p = 1;
  while (acc.coset != 1) {
    acc = ext_multiply(d, acc, b);
    ++p;
    if (p > d.m + 1) throw input_error("sigma orbit of b_j does not return to N");
  }
  ViaCertificate c{p, acc.u};
  if (!verify_via_certificate(d.phis[static_cast<size_t>(j - 1)], c))
    throw input_error("derived via certificate fails; datum inconsistent");
  return c;
}

ExtElement datum_conjugated_rep(const ExtensionDatum& d, int k, int j) {
  ExtElement bk, bj;
  bk.coset = k;
  bj.coset = j;
  return ext_multiply(d, ext_multiply(d, ext_invert(d, bk), bj), bk);
}

std::string extension_datum_to_text(const ExtensionDatum& d) {
  const Alphabet fiber(d.fiber_rank);
  std::ostringstream os;
  os << "extension n=" << d.fiber_rank << " m=" << d.m << "\n";
  for (int i = 0; i < d.m; ++i) {
    os << "phi " << i + 1;
    for (int g = 0; g < d.fiber_rank; ++g)
      os << ' ' << fiber.name(g) << "->" << d.phis[static_cast<size_t>(i)].fwd[static_cast<size_t>(g)].str(fiber);
    os << " inverse";
    for (int g = 0; g < d.fiber_rank; ++g)
      os << ' ' << fiber.name(g) << "->" << d.phis[static_cast<size_t>(i)].bwd[static_cast<size_t>(g)].str(fiber);
    os << "\n";
  }
  for (int i = 0; i < d.m; ++i)
    for (int j = 0; j < d.m; ++j)
      os << "nu " << i + 1 << ' ' << j + 1 << ' '
         << d.nu[static_cast<size_t>(i)][static_cast<size_t>(j)].str(fiber) << "\n";
  for (int i = 0; i < d.m; ++i) {
    os << "sigma " << i + 1;
    for (int j = 0; j < d.m; ++j) os << ' ' << d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)];
    os << "\n";
  }
  return os.str();
}

ExtensionDatum extension_datum_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  ExtensionDatum d;
  bool header = false;
  Alphabet fiber;
  auto parse_image = [&](const std::string& tok) {
    const auto arrow = tok.find("->");
    if (arrow == std::string::npos) throw input_error("bad image token: " + tok);
    const std::string gen = tok.substr(0, arrow);
    if (gen.size() != 1) throw input_error("bad generator name: " + gen);
    return std::make_pair(fiber.gen_index(gen[0]), Word::parse(tok.substr(arrow + 2), fiber));
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (!header) {
      std::string n, m;
      if (tag != "extension" || !(ls >> n >> m) || n.rfind("n=", 0) != 0 || m.rfind("m=", 0) != 0)
        throw input_error("bad extension header: " + line);
      d.fiber_rank = std::stoi(n.substr(2));
      d.m = std::stoi(m.substr(2));
      fiber = Alphabet(d.fiber_rank);
      d.phis.assign(static_cast<size_t>(d.m), Automorphism::identity(d.fiber_rank));
      d.nu.assign(static_cast<size_t>(d.m), std::vector<Word>(static_cast<size_t>(d.m)));
      d.sigma.assign(static_cast<size_t>(d.m), std::vector<int>(static_cast<size_t>(d.m), 0));
      for (int i = 0; i < d.m; ++i)
        for (int j = 0; j < d.m; ++j)
          d.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              (i == 0) ? j + 1 : (j == 0 ? i + 1 : 0);
      header = true;
      continue;
    }
    if (tag == "phi") {
      int i;
      ls >> i;
      if (i < 1 || i > d.m) throw input_error("phi index out of range");
      Automorphism a;
      a.fwd.assign(static_cast<size_t>(d.fiber_rank), Word());
      a.bwd.assign(static_cast<size_t>(d.fiber_rank), Word());
      bool in_inverse = false;
      std::string tok;
      while (ls >> tok) {
        if (tok == "inverse") {
          in_inverse = true;
          continue;
        }
        auto [g, w] = parse_image(tok);
        if (g < 0) throw input_error("unknown generator in phi line");
        (in_inverse ? a.bwd : a.fwd)[static_cast<size_t>(g)] = std::move(w);
      }
      d.phis[static_cast<size_t>(i - 1)] = std::move(a);
    } else if (tag == "nu") {
      int i, j;
      std::string w;
      if (!(ls >> i >> j >> w)) throw input_error("bad nu line: " + line);
      d.nu.at(static_cast<size_t>(i - 1)).at(static_cast<size_t>(j - 1)) = Word::parse(w, fiber);
    } else if (tag == "sigma") {
      int i;
      ls >> i;
      for (int j = 0; j < d.m; ++j) {
        int v;
        if (!(ls >> v)) throw input_error("bad sigma line: " + line);
        d.sigma.at(static_cast<size_t>(i - 1)).at(static_cast<size_t>(j)) = v;
      }
    } else {
      throw input_error("unknown extension datum line: " + line);
    }
  }
  if (!header) throw input_error("missing extension header");
  return d;
}

}  // namespace conjsep
