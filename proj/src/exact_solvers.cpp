#include "conjsep/exact_solvers.hpp"

#include <algorithm>
#include <numeric>

namespace conjsep {

namespace {

IMat identity_like(const IMat& m) { return imat_identity(static_cast<int>(m.size())); }

IMat imat_sub(const IMat& a, const IMat& b) {
  IMat c = a;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < c[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

IMat imat_add(const IMat& a, const IMat& b) {
  IMat c = a;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < c[i].size(); ++j) c[i][j] += b[i][j];
  return c;
}

IVec mod_vec(const IVec& v, long long n) {
  IVec r = v;
  for (auto& x : r) x = ((x % n) + n) % n;
  return r;
}

// Inverse of a unimodular integer matrix: U M = H = I gives U = M^-1.
IMat unimodular_inverse(const IMat& m) {
  const auto h = hermite_normal_form(m);
  if (!imat_is_identity(h.h)) throw input_error("matrix is not unimodular");
  return h.u;
}

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

}  // namespace

ZmTccResult zm_tcc_member(const ZmAutomorphism& a, const ZmCoset& c, const IVec& y) {
  const size_t m = a.M.size();
  if (c.x.size() != m || y.size() != m) throw input_error("Z^m dimension mismatch");
  for (const auto& row : c.basis)
    if (row.size() != m) throw input_error("Z^m basis dimension mismatch");
  const IMat i_minus_m = imat_sub(identity_like(a.M), a.M);
  IMat rows = c.basis;
  for (const auto& r : i_minus_m) rows.push_back(r);
  IVec target(m);
  for (size_t j = 0; j < m; ++j) target[j] = y[j] - c.x[j];
  ZmTccResult res;
  if (auto coeffs = lattice_solve(rows, target)) {
    res.member = true;
    res.basis_coeffs.assign(coeffs->begin(), coeffs->begin() + static_cast<long>(c.basis.size()));
    res.twist_z.assign(coeffs->begin() + static_cast<long>(c.basis.size()), coeffs->end());
    return res;
  }
  res.member = false;
  const auto sep = lattice_separator(rows, target);
  if (!sep.has_value()) throw input_error("separator missing for a non-member");
  res.certificate = *sep;
  return res;
}

bool verify_zm_tcc(const ZmAutomorphism& a, const ZmCoset& c, const IVec& y,
                   const ZmTccResult& r) {
  const size_t m = a.M.size();
  const IMat i_minus_m = imat_sub(identity_like(a.M), a.M);
  if (r.member) {
    if (r.twist_z.size() != m || r.basis_coeffs.size() != c.basis.size()) return false;
    IVec acc = ivec_mul(r.twist_z, i_minus_m);
    for (size_t i = 0; i < c.basis.size(); ++i)
      for (size_t j = 0; j < m; ++j) acc[j] += r.basis_coeffs[i] * c.basis[i][j];
    for (size_t j = 0; j < m; ++j)
      if (acc[j] + c.x[j] != y[j]) return false;
    return true;
  }
  IMat rows = c.basis;
  for (const auto& row : i_minus_m) rows.push_back(row);
  IVec target(m);
  for (size_t j = 0; j < m; ++j) target[j] = y[j] - c.x[j];
  return verify_lattice_separator(r.certificate, rows, target);
}

ZmOrbitResult zm_orbit_member(const IMat& M, const IVec& x, const IVec& y, long long step_budget,
                              long long modulus_budget) {
  ZmOrbitResult res;
  const IMat Minv = unimodular_inverse(M);
  // Zigzag over exponents 0, 1, -1, 2, -2, ...
  IVec fwd = x, bwd = x;
  if (x == y) {
    res.status = SolverStatus::Yes;
    res.k = 0;
    return res;
  }
  for (long long s = 1; s <= step_budget; ++s) {
    fwd = ivec_mul(fwd, M);
    if (fwd == y) {
      res.status = SolverStatus::Yes;
      res.k = s;
      return res;
    }
    bwd = ivec_mul(bwd, Minv);
    if (bwd == y) {
      res.status = SolverStatus::Yes;
      res.k = -s;
      return res;
    }
  }
  for (long long n = 2; n <= modulus_budget; ++n) {
    // The orbit of x mod n is a pure cycle (M is invertible mod n).
    IVec v = mod_vec(x, n);
    const IVec start = v;
    const IVec target = mod_vec(y, n);
    bool hit = false;
    long long guard = 0;
    do {
      if (v == target) {
        hit = true;
        break;
      }
      v = mod_vec(ivec_mul(v, M), n);
      if (++guard > 2000000) {
        hit = true;  // cycle too long to certify with this modulus
        break;
      }
    } while (v != start);
    if (!hit) {
      res.status = SolverStatus::No;
      res.modulus = n;
      return res;
    }
  }
  res.status = SolverStatus::Undecided;
  return res;
}

bool verify_zm_orbit(const IMat& M, const IVec& x, const IVec& y, const ZmOrbitResult& r) {
  switch (r.status) {
    case SolverStatus::Yes: {
      IVec v = x;
      const IMat Minv = unimodular_inverse(M);
      const long long n = r.k >= 0 ? r.k : -r.k;
      for (long long i = 0; i < n; ++i) v = ivec_mul(v, r.k >= 0 ? M : Minv);
      return v == y;
    }
    case SolverStatus::No: {
      if (r.modulus < 2) return false;
      IVec v = mod_vec(x, r.modulus);
      const IVec start = v;
      const IVec target = mod_vec(y, r.modulus);
      long long guard = 0;
      do {
        if (v == target) return false;
        v = mod_vec(ivec_mul(v, M), r.modulus);
        if (++guard > 2000000) return false;
      } while (v != start);
      return true;
    }
    case SolverStatus::Undecided:
      return true;
  }
  return false;
}

FatfElement fatf_apply(const FatfAutomorphism& a, const FatfElement& e) {
  FatfElement out;
  out.t = ivec_mul(e.t, a.Q);
  const IVec up = ivec_mul(abelianize(e.u, a.phi.rank()), a.P);
  for (size_t j = 0; j < out.t.size(); ++j) out.t[j] += up[j];
  out.u = a.phi.apply(e.u);
  return out;
}

FatfElement fatf_multiply(const FatfElement& x, const FatfElement& y) {
  FatfElement out;
  out.t = x.t;
  for (size_t j = 0; j < out.t.size(); ++j) out.t[j] += y.t[j];
  out.u = x.u * y.u;
  return out;
}

FatfAutomorphism fatf_compose(const FatfAutomorphism& a, const FatfAutomorphism& b) {
  FatfAutomorphism c;
  c.phi = compose(a.phi, b.phi);
  c.Q = imat_mul(a.Q, b.Q);
  c.P = imat_add(imat_mul(a.P, b.Q), imat_mul(abelianization_matrix(a.phi), b.P));
  return c;
}

FatfAutomorphism fatf_power(const FatfAutomorphism& a, long long k) {
  if (k < 1) throw input_error("fatf_power needs k >= 1");
  const IMat Phi = abelianization_matrix(a.phi);
  // P^(k) = P Q^{k-1} + Phi P^(k-1)
  IMat pk = a.P;
  IMat qpow = a.Q;  // Q^1
  for (long long i = 2; i <= k; ++i) {
    pk = imat_add(imat_mul(a.P, qpow), imat_mul(Phi, pk));
    qpow = imat_mul(qpow, a.Q);
  }
  FatfAutomorphism out;
  out.phi = power(a.phi, k);
  out.Q = qpow;  // Q^k after the loop ran to k
  if (k == 1) out.Q = a.Q;
  out.P = pk;
  return out;
}

FatfViaResult fatf_via_test(const FatfAutomorphism& a, const ViaCertificate& phi_cert,
                            long long k_bound) {
  if (!verify_via_certificate(a.phi, phi_cert)) throw input_error("invalid via certificate");
  FatfViaResult res;
  const int m = static_cast<int>(a.Q.size());
  // Order of Q: reduction mod 3 is injective on torsion of GL_m(Z), so the
  // order of Q mod 3 equals the order of Q whenever that is finite.
  long long o3 = -1;
  {
    IMat q3 = a.Q;
    for (auto& row : q3)
      for (auto& v : row) v = ((v % 3) + 3) % 3;
    IMat pw = q3;
    for (long long j = 1; j <= 100000; ++j) {
      if (imat_is_identity(pw)) {
        o3 = j;
        break;
      }
      pw = imat_mul(pw, q3);
      for (auto& row : pw)
        for (auto& v : row) v = ((v % 3) + 3) % 3;
    }
  }
  if (o3 < 0) {
    res.status = SolverStatus::Undecided;
    res.reason = "order of Q mod 3 not found within the cap";
    return res;
  }
  IMat qo = imat_identity(m);
  for (long long j = 0; j < o3; ++j) qo = imat_mul(qo, a.Q);
  if (!imat_is_identity(qo)) {
    res.status = SolverStatus::No;
    res.reason = "Q has infinite order: Q mod 3 has order " + std::to_string(o3) +
                 " but Q^" + std::to_string(o3) + " != I";
    return res;
  }
  const long long beta = o3;
  const long long L = lcm_ll(phi_cert.p, beta);
  if (L > k_bound) {
    res.status = SolverStatus::Undecided;
    res.reason = "lcm(p, ord Q) exceeds the exponent bound";
    return res;
  }
  // P^(mL) = m * P^(L) because Phi^L = I and Q^L = I, so the whole family
  // vanishes iff P^(L) does.
  const IMat pl = fatf_power(a, L).P;
  if (imat_is_zero(pl)) {
    res.status = SolverStatus::Yes;
    res.k = L;
    return res;
  }
  res.status = SolverStatus::No;
  res.reason = "P^(k) diverges: P^(m lcm) = m * P^(lcm) and P^(lcm) != 0";
  return res;
}

std::vector<FreeTwistedInstance> fnfm_twisted_reduce(const FnFmAutomorphism& a, const Word& x,
                                                     const Word& y, const Word& z, const Word& w) {
  std::vector<FreeTwistedInstance> out;
  if (!a.type7) {
    // (x,y) in Psi-TCC((z,w)) componentwise; rebased at 1.
    auto [ax, tx] = twist_normalize(a.phi, z, x);
    auto [ay, ty] = twist_normalize(a.psi, w, y);
    out.push_back({std::move(ax), std::move(tx)});
    out.push_back({std::move(ay), std::move(ty)});
    return out;
  }
  if (a.phi.rank() != a.psi.rank()) throw input_error("type VII needs equal ranks");
  // (x,y) in Psi-TCC((z,w))  <=>  (z^-1 x) * ((w^-1 y) (phi lambda_w)^-1)
  // lies in (phi lambda_w psi lambda_z)-TCC(1).
  const int r = a.phi.rank();
  const Automorphism phi_w = compose(a.phi, Automorphism::inner(w, r));
  const Automorphism psi_z = compose(a.psi, Automorphism::inner(z, r));
  FreeTwistedInstance inst;
  inst.aut = compose(phi_w, psi_z);
  inst.target = (z.inverse() * x) * phi_w.apply_inverse(w.inverse() * y);
  out.push_back(std::move(inst));
  return out;
}

bool fnfm_twisted_direct(const FnFmAutomorphism& a, const Word& x, const Word& y, const Word& z,
                         const Word& w, int bound) {
  const int rn = a.phi.rank();
  const int rm = a.psi.rank();
  const auto us = reduced_words_up_to(rn, bound);
  const auto vs = reduced_words_up_to(rm, bound);
  for (const Word& u : us)
    for (const Word& v : vs) {
      Word first, second;
      if (a.type7) {
        // (u,v)^-1 Psi = (v^-1 psi, u^-1 phi); product with (z,w)(u,v).
        first = a.psi.apply(v.inverse()) * z * u;
        second = a.phi.apply(u.inverse()) * w * v;
      } else {
        first = a.phi.apply(u.inverse()) * z * u;
        second = a.psi.apply(v.inverse()) * w * v;
      }
      if (first == x && second == y) return true;
    }
  return false;
}

std::vector<Word> via_brinkmann_targets(const Automorphism& phi, const ViaCertificate& c,
                                        const Word& x) {
  std::vector<Word> out;
  Word cur = x;
  for (long long i = 1; i <= c.p; ++i) {
    cur = phi.apply(cur);
    out.push_back(cur);
  }
  return out;
}

long long ZetaPreserving::eval(const FatfElement& e) const {
  long long acc = -k * e.t.at(0);
  Word img = e.u;
  for (long long i = 1; i <= k - 1; ++i) {
    // img = u phi^{i-1} on entry to iteration i.
    const IVec ab = abelianize(img, phi.rank());
    long long dot = 0;
    for (size_t j = 0; j < ab.size(); ++j) dot += ab[j] * P.at(j);
    acc -= (k - i) * dot;
    img = phi.apply(img);
  }
  return acc;
}

bool ZetaReversing::in_H(const Word& u) const {
  const IVec ab = abelianize(u, static_cast<int>(P.size()));
  long long dot = 0;
  for (size_t j = 0; j < ab.size(); ++j) dot += ab[j] * P[j];
  return dot % 2 == 0;
}

int ZetaReversing::mod2_coordinate(const FatfElement& e) const {
  return static_cast<int>(((e.t.at(0) % 2) + 2) % 2);
}

ZetaSeparator fnxz_zeta_separator(bool preserving, long long k, const IVec& P,
                                  const Automorphism& phi, int verify_len) {
  if (preserving) {
    ZetaPreserving z{k, P, phi};
    // Members of Psi-TCC(1) have the shape t^{-abel(u).P} (u^-1 phi) u and
    // must evaluate to zero.
    for (const Word& u : reduced_words_up_to(phi.rank(), verify_len)) {
      const IVec ab = abelianize(u, phi.rank());
      long long dot = 0;
      for (size_t j = 0; j < ab.size(); ++j) dot += ab[j] * P[j];
      FatfElement member;
      member.t = {-dot};
      member.u = phi.apply(u.inverse()) * u;
      if (z.eval(member) != 0)
        return ZetaDeclined{"zeta does not vanish on a sampled member (|u| <= " +
                            std::to_string(verify_len) + ")"};
    }
    return z;
  }
  ZetaReversing z{P};
  return z;
}

}  // namespace conjsep
