#include "conjsep/engine.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "conjsep/reductions.hpp"

namespace conjsep {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Conj: return "conj";
    case Kind::Twisted: return "twisted";
    case Kind::BrinkOrbit: return "brinkmann";
    case Kind::BrinkConj: return "brinkconj";
  }
  return "?";
}

std::string answer_name(Answer a) {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Undecided: return "UNDECIDED";
  }
  return "?";
}

namespace {

SetKind set_kind_for(Kind k) {
  switch (k) {
    case Kind::Conj: return SetKind::Alpha;
    case Kind::Twisted: return SetKind::Tcc;
    case Kind::BrinkOrbit: return SetKind::Orbit;
    case Kind::BrinkConj: return SetKind::Bcc;
  }
  return SetKind::Alpha;
}

long long exponent_at_level(int level) {
  if (level == 0) return 0;
  const long long k = (level + 1) / 2;
  return level % 2 == 1 ? k : -k;
}

IMat imat_i_minus(const IMat& m) {
  IMat r = imat_identity(static_cast<int>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) r[i][j] -= m[i][j];
  return r;
}

// ---------------------------------------------------------------------
// Member axis: normal forms of K elements by enumeration level.

class MemberAxis {
 public:
  MemberAxis(const GroupContext& ctx, const SetSpec& set) : ctx_(ctx), set_(set) {
    if (set.tag == SetSpec::Tag::Coset && free_rank(ctx) >= 0)
      graph_ = StallingsGraph::fold(ctx.alphabet().rank(), set.coset.gens);
    if (set.tag == SetSpec::Tag::Coset && free_rank(ctx) < 0) ball_ = {Word()};
  }

  const std::vector<Word>& level(int l) {
    while (static_cast<int>(levels_.size()) <= l) grow();
    return levels_[static_cast<size_t>(l)];
  }

 private:
  void grow() {
    const int l = static_cast<int>(levels_.size());
    std::vector<Word> fresh;
    switch (set_.tag) {
      case SetSpec::Tag::Fin: {
        if (l == 0)
          for (const Word& w : set_.fin) fresh.push_back(ctx_.normal_form(w));
        break;
      }
      case SetSpec::Tag::Coset: {
        if (graph_.has_value()) {
          for (const Word& loop : graph_->loops_of_length(l))
            fresh.push_back(ctx_.normal_form(loop * set_.coset.rep));
        } else {
          // Ball of the generated subgroup in a non-free context.
          std::vector<Word> next_ball;
          for (const Word& h : ball_) {
            for (const Word& g : set_.coset.gens) {
              next_ball.push_back(ctx_.multiply(h, g));
              next_ball.push_back(ctx_.multiply(h, ctx_.invert(g)));
            }
          }
          if (l == 0) next_ball = {Word()};
          std::sort(next_ball.begin(), next_ball.end(), [](const Word& a, const Word& b) { return a < b; });
          next_ball.erase(std::unique(next_ball.begin(), next_ball.end()), next_ball.end());
          std::vector<Word> grown;
          for (const Word& w : next_ball)
            if (ball_seen_.insert(w).second) grown.push_back(w);
          ball_.insert(ball_.end(), grown.begin(), grown.end());
          for (const Word& h : grown) fresh.push_back(ctx_.multiply(h, set_.coset.rep));
        }
        break;
      }
      case SetSpec::Tag::Rat: {
        for (const Word& w : nfa_words_up_to(set_.rat, l)) {
          const Word nf = ctx_.normal_form(w);
          if (rat_seen_raw_.insert(nf).second) fresh.push_back(nf);
        }
        break;
      }
    }
    std::sort(fresh.begin(), fresh.end(), [](const Word& a, const Word& b) { return a < b; });
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    std::vector<Word> out;
    for (const Word& w : fresh)
      if (seen_.insert(w).second) out.push_back(w);
    levels_.push_back(std::move(out));
  }

  const GroupContext& ctx_;
  SetSpec set_;
  std::optional<StallingsGraph> graph_;
  std::vector<Word> ball_;
  std::set<Word> ball_seen_;
  std::set<Word> rat_seen_raw_;
  std::set<Word> seen_;
  std::vector<std::vector<Word>> levels_;
};

// ---------------------------------------------------------------------
// Strand A: dovetailed candidate stream.

class MemberStream {
 public:
  MemberStream(const DecisionInstance& inst, const Budget& b)
      : inst_(inst), b_(b), members_(*inst.ctx, inst.set) {
    target_nf_ = inst.ctx->normal_form(inst.target);
    use_conj_ = inst.kind == Kind::Conj || inst.kind == Kind::Twisted || inst.kind == Kind::BrinkConj;
    use_exp_ = inst.kind == Kind::BrinkOrbit || inst.kind == Kind::BrinkConj;
    exp_cap_ = 2 * b.max_len + 1;
    if (inst.conjugator_constraint.has_value() && free_rank(*inst.ctx) >= 0)
      constraint_graph_ =
          StallingsGraph::fold(inst.ctx->alphabet().rank(), inst.conjugator_constraint->gens);
    setup_radius();
  }

  enum class Status { Tested, Hit, Exhausted };

  // Produces the next candidate member of the kind-set (with its witness)
  // and reports whether it equals the target.
  Status step(Word* value, Witness* wit) {
    while (true) {
      if (radius_ > max_radius()) return Status::Exhausted;
      if (combo_ >= combos_.size()) {
        ++radius_;
        setup_radius();
        continue;
      }
      const auto [ml, cl, el] = combos_[combo_];
      const auto& ms = members_.level(ml);
      const auto& zs = conj_level(cl);
      if (i_ >= ms.size() || (use_conj_ && j_ >= zs.size())) {
        advance_combo();
        continue;
      }
      const Word& s = ms[i_];
      Word z = use_conj_ ? zs[j_] : Word();
      const long long k = use_exp_ ? exponent_at_level(el) : 0;
      advance_inner(ms.size(), zs.size());
      if (constraint_graph_.has_value()) {
        // Lemma-style conjugator constraint: z must lie in H * rep.
        const Word h = z * inst_.conjugator_constraint->rep.inverse();
        if (!constraint_graph_->contains(h)) continue;
      }
      Word val = compute_value(s, z, k);
      if (wit != nullptr) {
        wit->member = s;
        wit->conjugator = z;
        wit->exponent = k;
      }
      if (value != nullptr) *value = val;
      return val == target_nf_ ? Status::Hit : Status::Tested;
    }
  }

 private:
  Word compute_value(const Word& s, const Word& z, long long k) const {
    const GroupContext& ctx = *inst_.ctx;
    Word base = s;
    if (use_exp_) {
      const Automorphism& phi = *inst_.aut;
      for (long long i = 0; i < (k >= 0 ? k : -k); ++i)
        base = k >= 0 ? ctx.apply(phi, base) : ctx.apply_inverse(phi, base);
    }
    if (!use_conj_) return ctx.normal_form(base);
    if (inst_.kind == Kind::Twisted) {
      const Automorphism& phi = *inst_.aut;
      return ctx.normal_form(substitute(phi.fwd, z.inverse()) * base * z);
    }
    return ctx.normal_form(z.inverse() * base * z);
  }

  const std::vector<Word>& conj_level(int l) {
    while (static_cast<int>(conj_levels_.size()) <= l)
      conj_levels_.push_back(inst_.ctx->elements_of_length(static_cast<int>(conj_levels_.size())));
    return conj_levels_[static_cast<size_t>(l)];
  }

  int max_radius() const {
    int r = b_.max_len;
    if (use_conj_) r += b_.max_len;
    if (use_exp_) r += exp_cap_;
    return r;
  }

  void setup_radius() {
    combos_.clear();
    combo_ = 0;
    i_ = j_ = 0;
    for (int ml = 0; ml <= std::min(radius_, b_.max_len); ++ml) {
      const int rest = radius_ - ml;
      if (use_conj_ && use_exp_) {
        for (int cl = 0; cl <= std::min(rest, b_.max_len); ++cl) {
          const int el = rest - cl;
          if (el <= exp_cap_) combos_.emplace_back(ml, cl, el);
        }
      } else if (use_conj_) {
        if (rest <= b_.max_len) combos_.emplace_back(ml, rest, 0);
      } else if (use_exp_) {
        if (rest <= exp_cap_) combos_.emplace_back(ml, 0, rest);
      } else if (rest == 0) {
        combos_.emplace_back(ml, 0, 0);
      }
    }
  }

  void advance_inner(size_t msize, size_t zsize) {
    if (use_conj_) {
      if (++j_ < zsize) return;
      j_ = 0;
      if (++i_ < msize) return;
      advance_combo();
      return;
    }
    if (++i_ < msize) return;
    advance_combo();
  }

  void advance_combo() {
    ++combo_;
    i_ = j_ = 0;
  }

  const DecisionInstance& inst_;
  Budget b_;
  MemberAxis members_;
  std::vector<std::vector<Word>> conj_levels_;
  std::optional<StallingsGraph> constraint_graph_;
  Word target_nf_;
  bool use_conj_ = true, use_exp_ = false;
  int exp_cap_ = 0;
  int radius_ = 0;
  std::vector<std::tuple<int, int, int>> combos_;
  size_t combo_ = 0, i_ = 0, j_ = 0;
};

// ---------------------------------------------------------------------
// Strand B: separating-quotient stream.

class SeparatorStream {
 public:
  SeparatorStream(const DecisionInstance& inst, const Budget& b, HomCache& cache)
      : inst_(inst), b_(b), cache_(cache), pres_(inst.ctx->presentation()) {
    target_nf_ = inst_.ctx->normal_form(inst_.target);
    kind_ = set_kind_for(inst.kind);
  }

  enum class Status { Tested, Hit, Exhausted };

  Status step(SeparatingCertificate* out) {
    while (true) {
      if (degree_ > b_.max_degree) return Status::Exhausted;
      const auto& homs = cache_.homs(pres_, degree_);
      if (idx_ >= homs.size()) {
        ++degree_;
        idx_ = 0;
        continue;
      }
      const FiniteHom& h = homs[idx_++];
      std::optional<InducedAut> ia;
      const Automorphism* phi = inst_.aut.has_value() ? &*inst_.aut : nullptr;
      if (kind_ == SetKind::Orbit || kind_ == SetKind::Bcc) {
        ia = induced_automorphism(h, *phi);
        if (!ia.has_value()) {
          // A refinement with a fully invariant kernel always carries the
          // induced map, but its degree usually explodes; only tiny images
          // are worth refining here.
          if (h.image_order(3) <= 3) {
            try {
              auto [pi, pia] = invariant_refine(pres_, h, *phi, 64);
              return test_hom(pi, &pia, out) ? Status::Hit : Status::Tested;
            } catch (const resource_error&) {
              return Status::Tested;
            }
          }
          return Status::Tested;
        }
      }
      return test_hom(h, ia.has_value() ? &*ia : nullptr, out) ? Status::Hit : Status::Tested;
    }
  }

 private:
  bool test_hom(const FiniteHom& h, const InducedAut* ia, SeparatingCertificate* out) {
    const Automorphism* phi = inst_.aut.has_value() ? &*inst_.aut : nullptr;
    const CosetSpec* constraint =
        inst_.conjugator_constraint.has_value() ? &*inst_.conjugator_constraint : nullptr;
    const auto img = image_of_set(h, ia, kind_, inst_.set, phi, constraint);
    const Perm y = h.apply(target_nf_);
    if (std::binary_search(img.begin(), img.end(), y)) return false;
    if (out != nullptr) {
      out->context_desc = inst_.ctx->describe();
      out->pres = pres_;
      out->hom = h;
      if (phi != nullptr) out->aut = *phi;
      out->kind = kind_;
      out->set = inst_.set;
      if (constraint != nullptr) out->twist_constraint = *constraint;
      out->excluded = target_nf_;
      out->image_audit = img;
    }
    return true;
  }

  const DecisionInstance& inst_;
  Budget b_;
  HomCache& cache_;
  Presentation pres_;
  Word target_nf_;
  SetKind kind_ = SetKind::Alpha;
  int degree_ = 1;
  size_t idx_ = 0;
};

// ---------------------------------------------------------------------
// The fair alternation loop (sequential and two-worker variants).

Verdict generic_loop(const DecisionInstance& inst, const Budget& b, const DecideOptions& opts,
                     bool separator_only, HomCache& cache) {
  Verdict v;
  if (!opts.parallel) {
    MemberStream A(inst, b);
    SeparatorStream B(inst, b, cache);
    bool a_alive = !separator_only, b_alive = true;
    long long steps = 0;
    bool next_a = true;
    while (steps < b.max_steps && (a_alive || b_alive)) {
      bool do_a = next_a;
      if (do_a && !a_alive) do_a = false;
      if (!do_a && !b_alive) do_a = a_alive;
      next_a = !next_a;
      if (do_a) {
        Witness wit;
        Word value;
        const auto st = A.step(&value, &wit);
        if (st == MemberStream::Status::Exhausted) {
          a_alive = false;
          continue;
        }
        ++steps;
        ++v.effort.members_tested;
        if (st == MemberStream::Status::Hit) {
          v.answer = Answer::Yes;
          v.witness = wit;
          return v;
        }
      } else {
        SeparatingCertificate cert;
        const auto st = B.step(&cert);
        if (st == SeparatorStream::Status::Exhausted) {
          b_alive = false;
          continue;
        }
        ++steps;
        ++v.effort.homs_tested;
        if (st == SeparatorStream::Status::Hit) {
          v.answer = Answer::No;
          v.certificate = std::move(cert);
          return v;
        }
      }
    }
    v.answer = Answer::Undecided;
    v.effort.note = "budget exhausted";
    return v;
  }

  // Two workers, one per strand; the verdict is replayed through the
  // sequential tick arithmetic so it cannot depend on wall clock.
  struct ScanResult {
    long long hit_at = -1;
    long long seen = 0;
    bool exhausted = false;
    Witness wit;
    SeparatingCertificate cert;
  };
  ScanResult ra, rb;
  std::atomic<long long> a_hit{-1}, b_hit{-1};
  std::thread ta([&] {
    if (separator_only) {
      ra.exhausted = true;
      return;
    }
    MemberStream A(inst, b);
    while (ra.seen < b.max_steps) {
      const long long other = b_hit.load(std::memory_order_relaxed);
      if (other >= 0 && ra.seen > other) break;  // cannot win the tick race
      Witness wit;
      Word value;
      const auto st = A.step(&value, &wit);
      if (st == MemberStream::Status::Exhausted) {
        ra.exhausted = true;
        return;
      }
      if (st == MemberStream::Status::Hit) {
        ra.hit_at = ra.seen;
        ra.wit = wit;
        a_hit.store(ra.hit_at, std::memory_order_relaxed);
        return;
      }
      ++ra.seen;
    }
  });
  std::thread tb([&] {
    SeparatorStream B(inst, b, cache);
    while (rb.seen < b.max_steps) {
      const long long other = a_hit.load(std::memory_order_relaxed);
      if (other >= 0 && rb.seen > other) break;
      SeparatingCertificate cert;
      const auto st = B.step(&cert);
      if (st == SeparatorStream::Status::Exhausted) {
        rb.exhausted = true;
        return;
      }
      if (st == SeparatorStream::Status::Hit) {
        rb.hit_at = rb.seen;
        rb.cert = std::move(cert);
        b_hit.store(rb.hit_at, std::memory_order_relaxed);
        return;
      }
      ++rb.seen;
    }
  });
  ta.join();
  tb.join();
  // Replay the sequential alternation.
  long long ia = 0, ib = 0, steps = 0;
  bool a_alive = !separator_only, b_alive = true;
  bool next_a = true;
  while (steps < b.max_steps && (a_alive || b_alive)) {
    bool do_a = next_a;
    if (do_a && !a_alive) do_a = false;
    if (!do_a && !b_alive) do_a = a_alive;
    next_a = !next_a;
    if (do_a) {
      if (ra.hit_at >= 0 && ia == ra.hit_at) {
        v.answer = Answer::Yes;
        v.witness = ra.wit;
        v.effort.members_tested = ia + 1;
        v.effort.homs_tested = ib;
        return v;
      }
      if (ra.exhausted && ia >= ra.seen) {
        a_alive = false;
        continue;
      }
      if (ia >= ra.seen && !ra.exhausted && ra.hit_at < 0) {
        a_alive = false;  // scanned to the cap without resolution
        continue;
      }
      ++ia;
      ++steps;
    } else {
      if (rb.hit_at >= 0 && ib == rb.hit_at) {
        v.answer = Answer::No;
        v.certificate = rb.cert;
        v.effort.members_tested = ia;
        v.effort.homs_tested = ib + 1;
        return v;
      }
      if (rb.exhausted && ib >= rb.seen) {
        b_alive = false;
        continue;
      }
      if (ib >= rb.seen && !rb.exhausted && rb.hit_at < 0) {
        b_alive = false;
        continue;
      }
      ++ib;
      ++steps;
    }
  }
  v.answer = Answer::Undecided;
  v.effort.members_tested = ia;
  v.effort.homs_tested = ib;
  v.effort.note = "budget exhausted";
  return v;
}

// ---------------------------------------------------------------------
// Structure dispatch helpers.

bool verify_via_in_context(const GroupContext& ctx, const Automorphism& aut,
                           const ViaCertificate& c) {
  if (c.p < 1) return false;
  for (int i = 0; i < ctx.alphabet().rank(); ++i) {
    Word w({i + 1});
    for (long long j = 0; j < c.p; ++j) w = ctx.apply(aut, w);
    if (w != ctx.normal_form(c.delta.inverse() * Word({i + 1}) * c.delta)) return false;
  }
  return true;
}

FatfElement fatf_split(const FatfShape& sh, const Word& nf) {
  FatfElement e;
  e.t.assign(static_cast<size_t>(sh.dim), 0);
  std::vector<Letter> fiber;
  for (Letter l : nf.letters()) {
    const int g = gen_of(l);
    if (g >= sh.rank)
      e.t[static_cast<size_t>(g - sh.rank)] += is_positive(l) ? 1 : -1;
    else
      fiber.push_back(l);
  }
  e.u = Word(std::move(fiber));
  return e;
}

Word fatf_join(const FatfShape& sh, const FatfElement& e) {
  Word w;
  for (int j = 0; j < sh.dim; ++j) w = w * Word({sh.rank + j + 1}).pow(e.t[static_cast<size_t>(j)]);
  return w * e.u;
}

// Split a context automorphism of F_n x Z^m into (phi, Q, P); fails when
// some Z-letter image leaves the center.
std::optional<FatfAutomorphism> fatf_from_context_aut(const FatfShape& sh, const Automorphism& a) {
  if (a.rank() != sh.rank + sh.dim) return std::nullopt;
  FatfAutomorphism out;
  out.Q.assign(static_cast<size_t>(sh.dim), IVec(static_cast<size_t>(sh.dim), 0));
  out.P.assign(static_cast<size_t>(sh.rank), IVec(static_cast<size_t>(sh.dim), 0));
  for (int j = 0; j < sh.dim; ++j) {
    const FatfElement e = fatf_split(sh, a.fwd[static_cast<size_t>(sh.rank + j)]);
    if (!e.u.empty()) return std::nullopt;
    out.Q[static_cast<size_t>(j)] = e.t;
  }
  for (int i = 0; i < sh.rank; ++i) {
    const FatfElement e = fatf_split(sh, a.fwd[static_cast<size_t>(i)]);
    out.P[static_cast<size_t>(i)] = e.t;
    out.phi.fwd.push_back(e.u);
  }
  if (a.has_inverse()) {
    for (int i = 0; i < sh.rank; ++i) {
      const FatfElement e = fatf_split(sh, a.bwd[static_cast<size_t>(i)]);
      out.phi.bwd.push_back(e.u);
    }
  }
  return out;
}

// Block-diagonal join of finite homs over a common generator list.
FiniteHom join_homs(const std::vector<FiniteHom>& hs, int rank) {
  FiniteHom out;
  out.degree = 0;
  for (const auto& h : hs) out.degree += h.degree;
  if (out.degree == 0) {
    out.degree = 1;
    out.images.assign(static_cast<size_t>(rank), Perm::identity(1));
    return out;
  }
  for (int g = 0; g < rank; ++g) {
    std::vector<uint8_t> img(static_cast<size_t>(out.degree));
    int off = 0;
    for (const auto& h : hs) {
      for (int x = 0; x < h.degree; ++x)
        img[static_cast<size_t>(off + x)] =
            static_cast<uint8_t>(off + h.images[static_cast<size_t>(g)].apply(x));
      off += h.degree;
    }
    out.images.push_back(Perm(std::move(img)));
  }
  return out;
}

// gen -> rotation^value in the cyclic group of order n (as an n-cycle).
FiniteHom cyclic_hom(const std::vector<long long>& values, long long n) {
  FiniteHom h;
  h.degree = static_cast<int>(n);
  for (long long v : values) {
    const long long r = ((v % n) + n) % n;
    std::vector<uint8_t> img(static_cast<size_t>(n));
    for (long long x = 0; x < n; ++x) img[static_cast<size_t>(x)] = static_cast<uint8_t>((x + r) % n);
    h.images.push_back(Perm(std::move(img)));
  }
  return h;
}

Verdict yes_verdict(Witness w) {
  Verdict v;
  v.answer = Answer::Yes;
  v.witness = std::move(w);
  return v;
}

// ---------------------------------------------------------------------
// Fast paths. Every returned verdict is certified; nullopt falls through
// to the generic loop.

std::optional<Verdict> fast_free_conj(const DecisionInstance& inst, const Budget& b,
                                      const DecideOptions& opts, HomCache& cache) {
  if (inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  const Word target = inst.ctx->normal_form(inst.target);
  for (const Word& s : inst.set.fin) {
    if (auto z = free_conjugacy(s, target)) return yes_verdict({s, *z, 0});
  }
  return generic_loop(inst, b, opts, /*separator_only=*/true, cache);
}

std::optional<Verdict> fast_free_twisted(const DecisionInstance& inst, const Budget& b,
                                         const DecideOptions& opts, HomCache& cache) {
  if (!inst.via.has_value() || inst.conjugator_constraint.has_value()) return std::nullopt;
  const Automorphism& phi = *inst.aut;
  const GphiConjInstance gi = twisted_to_gphi(phi, *inst.via, inst.set, inst.target);
  DecisionInstance sub;
  sub.ctx = make_gphi_context(gi.gphi);
  sub.kind = Kind::Conj;
  sub.set = gi.set;
  sub.target = gi.target;
  DecideOptions sub_opts = opts;
  sub_opts.cache = &cache;
  Verdict sv = decide(sub, b, sub_opts);
  if (sv.answer == Answer::Yes) {
    // Recover the original member k and convert the G^phi conjugator back
    // to a twisted conjugator.
    const GroupContext& sctx = *sub.ctx;
    const Word t({phi.rank() + 1});
    const Word kw_img = sctx.multiply(t, sv.witness->member);
    const SdElement split_k = sd_split(sctx, kw_img);
    if (split_k.t != 0) return std::nullopt;  // unexpected; let the generic loop handle it
    const Word k = phi.apply(split_k.g);
    const SdElement split_z = sd_split(sctx, sv.witness->conjugator);
    const Word u = gphi_witness_to_twisted(phi, k, split_z.t, split_z.g);
    const Word lhs = phi.apply(u.inverse()) * k * u;
    if (lhs != inst.ctx->normal_form(inst.target)) return std::nullopt;
    Verdict v = yes_verdict({k, u, 0});
    v.effort = sv.effort;
    return v;
  }
  if (sv.answer == Answer::No) {
    sv.certificate->context_desc += " (from twisted reduction in " + inst.ctx->describe() + ")";
    return sv;
  }
  return sv;  // undecided, with effort
}

std::optional<Verdict> fast_free_brinkconj(const DecisionInstance& inst, const Budget& b,
                                           const DecideOptions& opts, HomCache& cache) {
  if (!inst.via.has_value() || inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  const Automorphism& phi = *inst.aut;
  const Word target = inst.ctx->normal_form(inst.target);
  for (const Word& s : inst.set.fin) {
    const auto targets = via_brinkmann_targets(phi, *inst.via, s);
    for (size_t i = 0; i < targets.size(); ++i) {
      if (auto z = free_conjugacy(targets[i], target))
        return yes_verdict({s, *z, static_cast<long long>(i + 1)});
    }
  }
  return generic_loop(inst, b, opts, /*separator_only=*/true, cache);
}

std::optional<Verdict> fast_free_brinkorbit(const DecisionInstance& inst, const Budget& b,
                                            const DecideOptions& opts, HomCache& cache) {
  if (!inst.via.has_value() || inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  const Automorphism& phi = *inst.aut;
  const ViaCertificate& c = *inst.via;
  const Word target = inst.ctx->normal_form(inst.target);
  for (const Word& s : inst.set.fin) {
    Word v = s;
    for (long long r = 0; r < c.p; ++r) {
      if (r > 0) v = phi.apply(v);
      // s phi^{qp+r} = Delta^-q (s phi^r) Delta^q.
      if (c.delta.empty() || v * c.delta == c.delta * v) {
        if (v == target) return yes_verdict({s, Word(), r});
      } else {
        const long long bound = target.size() + v.size() + c.delta.size() + 2;
        for (long long q = -bound; q <= bound; ++q) {
          if (v.conjugated_by(c.delta.pow(q)) == target)
            return yes_verdict({s, Word(), q * c.p + r});
        }
      }
    }
  }
  return generic_loop(inst, b, opts, /*separator_only=*/true, cache);
}

// Z^m data extracted from a rank-0 free-abelian times free context.
struct ZmView {
  int dim = 0;
  IMat M;  // identity when the instance has no automorphism
  IVec target;
};

std::optional<ZmView> zm_view(const DecisionInstance& inst, const FatfShape& sh) {
  if (sh.rank != 0) return std::nullopt;
  ZmView v;
  v.dim = sh.dim;
  if (inst.aut.has_value()) {
    const auto fa = fatf_from_context_aut(sh, *inst.aut);
    if (!fa.has_value()) return std::nullopt;
    v.M = fa->Q;
  } else {
    v.M = imat_identity(sh.dim);
  }
  v.target = abelianize(inst.ctx->normal_form(inst.target), sh.dim);
  return v;
}

std::optional<Verdict> fast_zm(const DecisionInstance& inst, const Budget& b,
                               const DecideOptions& opts, HomCache& cache, const FatfShape& sh) {
  const auto view = zm_view(inst, sh);
  if (!view.has_value()) return std::nullopt;
  const int dim = view->dim;
  auto vec_of = [&](const Word& w) { return abelianize(inst.ctx->normal_form(w), dim); };
  auto word_of = [&](const IVec& t) {
    FatfElement e;
    e.t = t;
    return fatf_join(sh, e);
  };

  const Kind kind = inst.kind;
  if (kind == Kind::Conj || kind == Kind::Twisted) {
    const IMat M = kind == Kind::Conj ? imat_identity(dim) : view->M;
    std::vector<ZmCoset> cosets;
    std::vector<Word> member_words;
    if (inst.set.tag == SetSpec::Tag::Coset) {
      ZmCoset c;
      for (const Word& g : inst.set.coset.gens) c.basis.push_back(vec_of(g));
      c.x = vec_of(inst.set.coset.rep);
      cosets.push_back(std::move(c));
      member_words.push_back(inst.set.coset.rep);
    } else if (inst.set.tag == SetSpec::Tag::Fin) {
      for (const Word& w : inst.set.fin) {
        ZmCoset c;
        c.x = vec_of(w);
        cosets.push_back(std::move(c));
        member_words.push_back(w);
      }
    } else {
      return std::nullopt;  // rational sets fall back to the generic loop
    }
    std::optional<ZmTccResult> last_no;
    for (size_t i = 0; i < cosets.size(); ++i) {
      const auto r = zm_tcc_member(ZmAutomorphism{M}, cosets[i], view->target);
      if (r.member) {
        // member element = y - z(I - M); conjugator word from z.
        IVec zim = ivec_mul(r.twist_z, imat_i_minus(M));
        IVec member_vec = view->target;
        for (size_t j = 0; j < member_vec.size(); ++j) member_vec[j] -= zim[j];
        Witness w;
        w.member = inst.ctx->normal_form(word_of(member_vec));
        w.conjugator = word_of(r.twist_z);
        Verdict v = yes_verdict(std::move(w));
        return v;
      }
      last_no = r;
      if (cosets.size() > 1) last_no.reset();  // a single residue cannot cover several members
    }
    if (cosets.size() == 1 && last_no.has_value()) {
      Verdict v;
      v.answer = Answer::No;
      LatticeNoCert cert;
      const IMat i_minus_m = imat_i_minus(M);
      cert.rows = cosets[0].basis;
      for (const auto& row : i_minus_m) cert.rows.push_back(row);
      cert.target = view->target;
      for (size_t j = 0; j < cert.target.size(); ++j) cert.target[j] -= cosets[0].x[j];
      cert.sep = last_no->certificate;
      v.lattice_no = std::move(cert);
      return v;
    }
    return generic_loop(inst, b, opts, /*separator_only=*/true, cache);
  }

  // Brinkmann kinds: conjugacy is trivial here, so both reduce to orbits.
  if (inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  OrbitNoCert no;
  for (const Word& w : inst.set.fin) {
    const IVec x = vec_of(w);
    const auto r = zm_orbit_member(view->M, x, view->target, 4 * b.max_steps, 64);
    if (r.status == SolverStatus::Yes) {
      Witness wit;
      wit.member = inst.ctx->normal_form(w);
      wit.exponent = r.k;
      return yes_verdict(std::move(wit));
    }
    if (r.status == SolverStatus::Undecided) {
      Verdict v;
      v.answer = Answer::Undecided;
      v.effort.note = "orbit solver budget exhausted";
      return v;
    }
    no.moduli.push_back(r.modulus);
  }
  Verdict v;
  v.answer = Answer::No;
  v.orbit_no = std::move(no);
  return v;
}

// ---------------------------------------------------------------------

std::optional<Verdict> fast_semidirect_conj(const DecisionInstance& inst, const Budget& b,
                                            const DecideOptions& opts, HomCache& cache,
                                            const Automorphism& phi) {
  if (inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  const GroupContext& ctx = *inst.ctx;
  const SdElement ty = sd_split(ctx, ctx.normal_form(inst.target));
  bool all_excluded_exactly = true;
  for (const Word& mw : inst.set.fin) {
    const Word m_nf = ctx.normal_form(mw);
    const SdElement tx = sd_split(ctx, m_nf);
    const SdReduction red = semidirect_conjugacy_instance(tx, ty);
    if (red.kind == SdInstanceKind::No) continue;
    if (red.kind == SdInstanceKind::Generic || !inst.via.has_value()) {
      all_excluded_exactly = false;
      continue;
    }
    DecisionInstance sub;
    sub.ctx = make_free_context(phi.rank());
    sub.aut = phi;
    sub.via = inst.via;
    sub.set = SetSpec::finite({red.x});
    sub.target = red.y;
    sub.kind = red.kind == SdInstanceKind::Twisted ? Kind::Twisted : Kind::BrinkConj;
    DecideOptions sub_opts = opts;
    sub_opts.cache = &cache;
    const Verdict sv = decide(sub, b, sub_opts);
    if (sv.answer == Answer::Yes) {
      Witness w;
      w.member = m_nf;
      const Word t({phi.rank() + 1});
      if (red.kind == SdInstanceKind::Twisted) {
        // u^-1 (t x) u = t (u^-1 phi) x u = t y.
        w.conjugator = sv.witness->conjugator;
      } else {
        // (t^i z)^-1 x (t^i z) = z^-1 (x phi^i) z = y.
        w.conjugator = ctx.normal_form(t.pow(sv.witness->exponent) * sv.witness->conjugator);
      }
      if (ctx.normal_form(w.conjugator.inverse() * m_nf * w.conjugator) !=
          ctx.normal_form(inst.target))
        return std::nullopt;
      return yes_verdict(std::move(w));
    }
    if (sv.answer == Answer::Undecided) all_excluded_exactly = false;
  }
  if (all_excluded_exactly) return generic_loop(inst, b, opts, /*separator_only=*/true, cache);
  return generic_loop(inst, b, opts, /*separator_only=*/false, cache);
}

std::optional<Verdict> fast_extension_conj(const DecisionInstance& inst, const Budget& b,
                                           const DecideOptions& opts, HomCache& cache,
                                           const ExtensionDatum& d) {
  const GroupContext& ctx = *inst.ctx;
  const ExtElement target = ext_evaluate(d, ctx.normal_form(inst.target));
  const Nfa k_ext = setspec_to_nfa(inst.set, ctx.alphabet().rank());
  const RationalDecomposition pieces = decompose_over_extension(k_ext, d);
  const auto subs = extension_conjugacy_decompose(d, pieces, target);
  bool all_certified_no = true;
  for (const ExtSubinstance& s : subs) {
    DecisionInstance sub;
    sub.ctx = make_free_context(d.fiber_rank);
    sub.kind = Kind::Twisted;
    sub.aut = s.aut;
    sub.via = s.via;
    sub.set = SetSpec::rational(pieces.pieces[static_cast<size_t>(s.j - 1)]);
    sub.target = s.target;
    DecideOptions sub_opts = opts;
    sub_opts.cache = &cache;
    const Verdict sv = decide(sub, b, sub_opts);
    if (sv.answer == Answer::Yes) {
      // Proof chain: the fiber twisted witness (member y0, conjugator w)
      // lifts to the extension conjugator (phi_j^-1(w), b_k).
      const Word z = d.phis[static_cast<size_t>(s.j - 1)].apply_inverse(sv.witness->conjugator);
      const ExtElement conj{z, s.k};
      const ExtElement member{sv.witness->member, s.j};
      const ExtElement check =
          ext_multiply(d, ext_multiply(d, ext_invert(d, conj), member), conj);
      if (!(check == target)) return std::nullopt;
      Witness w;
      w.member = ext_to_word(d, member);
      w.conjugator = ext_to_word(d, conj);
      return yes_verdict(std::move(w));
    }
    if (sv.answer != Answer::No) all_certified_no = false;
  }
  return generic_loop(inst, b, opts, /*separator_only=*/all_certified_no, cache);
}

// ---------------------------------------------------------------------
// F_n x Z orientation-preserving twisted fast path (dim 1, Q = [1]).

std::optional<Verdict> fast_fatf_preserving(const DecisionInstance& inst, const Budget& b,
                                            const DecideOptions& opts, HomCache& cache,
                                            const FatfShape& sh) {
  if (sh.dim != 1 || sh.rank < 1) return std::nullopt;
  if (!inst.via.has_value() || inst.set.tag != SetSpec::Tag::Fin) return std::nullopt;
  if (inst.conjugator_constraint.has_value()) return std::nullopt;
  const auto fa = fatf_from_context_aut(sh, *inst.aut);
  if (!fa.has_value() || !fa->phi.has_inverse()) return std::nullopt;
  if (!(fa->Q == imat_identity(1))) return std::nullopt;
  // Fiber certificate: on fiber elements the context certificate projects
  // to phi^p = conjugation by the fiber part of delta.
  const FatfElement dl = fatf_split(sh, inst.ctx->normal_form(inst.via->delta));
  const ViaCertificate fiber_cert{inst.via->p, dl.u};
  if (!verify_via_certificate(fa->phi, fiber_cert)) return std::nullopt;
  const auto via_res = fatf_via_test(*fa, fiber_cert, 100000);
  if (via_res.status != SolverStatus::Yes) return std::nullopt;
  const long long k = via_res.k;

  const Word y_nf = inst.ctx->normal_form(inst.target);
  std::vector<FiniteHom> no_components;
  for (const Word& mw : inst.set.fin) {
    const FatfElement m0 = fatf_split(sh, inst.ctx->normal_form(mw));
    // Rebase: y in TCC(m0) iff m0^-1 y in (Psi lambda_m0)-TCC(1); the
    // twisted automorphism picks up lambda_{m0.u} on the fiber, P unchanged.
    const Word m0w = inst.ctx->normal_form(mw);
    const FatfElement rebased = fatf_split(sh, inst.ctx->normal_form(m0w.inverse() * y_nf));
    const Automorphism phi2 = compose(fa->phi, Automorphism::inner(m0.u, sh.rank));
    const ViaCertificate cert2 = via_certificate_for_twist(fa->phi, fiber_cert, m0.u);
    DecisionInstance sub;
    sub.ctx = make_free_context(sh.rank);
    sub.kind = Kind::Twisted;
    sub.aut = phi2;
    sub.via = cert2;
    sub.set = SetSpec::finite({Word()});
    sub.target = rebased.u;
    DecideOptions sub_opts = opts;
    sub_opts.cache = &cache;
    const Verdict sv = decide(sub, b, sub_opts);
    if (sv.answer == Answer::Undecided) return std::nullopt;
    if (sv.answer == Answer::Yes) {
      const Word u = sv.witness->conjugator;
      IVec up = ivec_mul(abelianize(u, sh.rank), fa->P);
      if (rebased.t.at(0) == -up.at(0)) {
        Witness w;
        w.member = m0w;
        w.conjugator = u;
        const Word lhs =
            inst.ctx->normal_form(substitute(inst.aut->fwd, u.inverse()) * m0w * u);
        if (lhs != y_nf) return std::nullopt;
        return yes_verdict(std::move(w));
      }
      // Excluded by the exponent functional: zeta kills TCC(1) but not the
      // rebased target.
      ZetaPreserving zeta{k, {}, phi2};
      zeta.P.assign(static_cast<size_t>(sh.rank), 0);
      for (int i = 0; i < sh.rank; ++i) zeta.P[static_cast<size_t>(i)] = fa->P[static_cast<size_t>(i)].at(0);
      const long long v0 = zeta.eval(rebased);
      if (v0 == 0) return std::nullopt;  // functional cannot separate; bail out
      const long long N = std::llabs(v0) + 1;
      if (N > 120) return std::nullopt;
      std::vector<long long> values;
      for (int i = 0; i < sh.rank; ++i) {
        FatfElement gen;
        gen.t = {0};
        gen.u = Word({i + 1});
        values.push_back(zeta.eval(gen));
      }
      values.push_back(-k);  // the t generator
      no_components.push_back(cyclic_hom(values, N));
      continue;
    }
    // Fiber NO: lift the fiber certificate by sending t to the identity.
    const FiniteHom& fh = sv.certificate->hom;
    FiniteHom lifted;
    lifted.degree = fh.degree;
    for (int i = 0; i < sh.rank; ++i) lifted.images.push_back(fh.images[static_cast<size_t>(i)]);
    lifted.images.push_back(Perm::identity(fh.degree));
    no_components.push_back(std::move(lifted));
  }
  // All members excluded: join the components and verify mechanically.
  SeparatingCertificate cert;
  cert.context_desc = inst.ctx->describe();
  cert.pres = inst.ctx->presentation();
  cert.hom = join_homs(no_components, sh.rank + sh.dim);
  cert.aut = *inst.aut;
  cert.kind = SetKind::Tcc;
  cert.set = inst.set;
  cert.excluded = y_nf;
  cert.image_audit = image_of_set(cert.hom, nullptr, SetKind::Tcc, cert.set, &*cert.aut);
  if (!verify_separation(cert)) return std::nullopt;
  Verdict v;
  v.answer = Answer::No;
  v.certificate = std::move(cert);
  return v;
}

std::optional<Verdict> try_fast_paths(const DecisionInstance& inst, const Budget& b,
                                      const DecideOptions& opts, HomCache& cache) {
  const GroupContext& ctx = *inst.ctx;
  if (const FatfShape* sh = fatf_shape(ctx)) {
    if (sh->rank == 0) return fast_zm(inst, b, opts, cache, *sh);
    if (inst.kind == Kind::Twisted) {
      auto v = fast_fatf_preserving(inst, b, opts, cache, *sh);
      if (v.has_value()) return v;
    }
    return std::nullopt;
  }
  if (free_rank(ctx) >= 0) {
    switch (inst.kind) {
      case Kind::Conj: return fast_free_conj(inst, b, opts, cache);
      case Kind::Twisted: return fast_free_twisted(inst, b, opts, cache);
      case Kind::BrinkConj: return fast_free_brinkconj(inst, b, opts, cache);
      case Kind::BrinkOrbit: return fast_free_brinkorbit(inst, b, opts, cache);
    }
    return std::nullopt;
  }
  if (const Automorphism* phi = semidirect_fiber_aut(ctx)) {
    if (inst.kind == Kind::Conj) return fast_semidirect_conj(inst, b, opts, cache, *phi);
    return std::nullopt;
  }
  if (const ExtensionDatum* d = extension_data(ctx)) {
    if (inst.kind == Kind::Conj) return fast_extension_conj(inst, b, opts, cache, *d);
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Verdict decide(const DecisionInstance& inst, const Budget& b, const DecideOptions& opts) {
  if (inst.ctx == nullptr) throw input_error("instance has no group context");
  if (inst.kind != Kind::Conj && !inst.aut.has_value())
    throw input_error(kind_name(inst.kind) + " instances need an automorphism");
  if (inst.aut.has_value() && !inst.ctx->verify_automorphism_in_context(*inst.aut))
    throw input_error("instance automorphism fails verification");
  if (inst.via.has_value() && inst.aut.has_value() &&
      !verify_via_in_context(*inst.ctx, *inst.aut, *inst.via))
    throw input_error("via certificate fails verification");
  HomCache local_cache;
  HomCache& cache = opts.cache != nullptr ? *opts.cache : local_cache;
  if (!opts.no_fast_path) {
    if (auto v = try_fast_paths(inst, b, opts, cache)) return *v;
  }
  return generic_loop(inst, b, opts, /*separator_only=*/false, cache);
}

bool verify(const Verdict& v, const DecisionInstance& inst) {
  const GroupContext& ctx = *inst.ctx;
  switch (v.answer) {
    case Answer::Undecided:
      return true;
    case Answer::Yes: {
      if (!v.witness.has_value()) return false;
      const Witness& w = *v.witness;
      const Word target = ctx.normal_form(inst.target);
      Word base = ctx.normal_form(w.member);
      if (inst.kind == Kind::BrinkOrbit || inst.kind == Kind::BrinkConj) {
        const Automorphism& phi = *inst.aut;
        const long long n = w.exponent >= 0 ? w.exponent : -w.exponent;
        for (long long i = 0; i < n; ++i)
          base = w.exponent >= 0 ? ctx.apply(phi, base) : ctx.apply_inverse(phi, base);
      }
      Word lhs;
      if (inst.kind == Kind::Twisted) {
        const Automorphism& phi = *inst.aut;
        lhs = ctx.normal_form(substitute(phi.fwd, w.conjugator.inverse()) * base * w.conjugator);
      } else if (inst.kind == Kind::BrinkOrbit) {
        lhs = base;
      } else {
        lhs = ctx.normal_form(w.conjugator.inverse() * base * w.conjugator);
      }
      if (lhs != target) return false;
      if (inst.conjugator_constraint.has_value() && free_rank(ctx) >= 0) {
        const auto g = StallingsGraph::fold(ctx.alphabet().rank(), inst.conjugator_constraint->gens);
        if (!g.contains(w.conjugator * inst.conjugator_constraint->rep.inverse())) return false;
      }
      // Membership of the witness member where an exact oracle exists.
      if (inst.set.tag == SetSpec::Tag::Fin) {
        bool found = false;
        for (const Word& s : inst.set.fin)
          if (ctx.normal_form(s) == ctx.normal_form(w.member)) found = true;
        if (!found) return false;
      } else if (free_rank(ctx) >= 0) {
        if (!inst.set.free_contains(ctx.normal_form(w.member), ctx.alphabet().rank())) return false;
      }
      return true;
    }
    case Answer::No: {
      if (v.certificate.has_value()) return verify_separation(*v.certificate);
      if (v.lattice_no.has_value()) {
        // Recompute the lattice data from the instance before checking the
        // residue, so a tampered certificate cannot smuggle in other rows.
        const FatfShape* sh = fatf_shape(ctx);
        if (sh == nullptr || sh->rank != 0) return false;
        const int dim = sh->dim;
        IMat M = imat_identity(dim);
        if (inst.kind == Kind::Twisted) {
          const auto fa = fatf_from_context_aut(*sh, *inst.aut);
          if (!fa.has_value()) return false;
          M = fa->Q;
        }
        IMat rows;
        IVec x;
        if (inst.set.tag == SetSpec::Tag::Coset) {
          for (const Word& g : inst.set.coset.gens)
            rows.push_back(abelianize(ctx.normal_form(g), dim));
          x = abelianize(ctx.normal_form(inst.set.coset.rep), dim);
        } else if (inst.set.tag == SetSpec::Tag::Fin && inst.set.fin.size() == 1) {
          x = abelianize(ctx.normal_form(inst.set.fin[0]), dim);
        } else {
          return false;
        }
        IMat id = imat_identity(dim);
        for (size_t i = 0; i < id.size(); ++i) {
          IVec row = id[i];
          for (int j = 0; j < dim; ++j) row[static_cast<size_t>(j)] -= M[i][static_cast<size_t>(j)];
          rows.push_back(std::move(row));
        }
        IVec target = abelianize(ctx.normal_form(inst.target), dim);
        for (int j = 0; j < dim; ++j) target[static_cast<size_t>(j)] -= x[static_cast<size_t>(j)];
        if (rows != v.lattice_no->rows || target != v.lattice_no->target) return false;
        return verify_lattice_separator(v.lattice_no->sep, v.lattice_no->rows,
                                        v.lattice_no->target);
      }
      if (v.orbit_no.has_value()) {
        const FatfShape* sh = fatf_shape(ctx);
        if (sh == nullptr || sh->rank != 0 || inst.set.tag != SetSpec::Tag::Fin) return false;
        const auto fa = fatf_from_context_aut(*sh, *inst.aut);
        if (!fa.has_value()) return false;
        if (v.orbit_no->moduli.size() != inst.set.fin.size()) return false;
        const IVec y = abelianize(ctx.normal_form(inst.target), sh->dim);
        for (size_t i = 0; i < inst.set.fin.size(); ++i) {
          const IVec x = abelianize(ctx.normal_form(inst.set.fin[i]), sh->dim);
          ZmOrbitResult r;
          r.status = SolverStatus::No;
          r.modulus = v.orbit_no->moduli[i];
          if (!verify_zm_orbit(fa->Q, x, y, r)) return false;
        }
        return true;
      }
      return false;
    }
  }
  return false;
}

std::vector<std::pair<Word, Witness>> enumerate_members(const DecisionInstance& inst,
                                                        int max_level, long long max_items) {
  Budget b;
  b.max_len = max_level;
  MemberStream stream(inst, b);
  std::vector<std::pair<Word, Witness>> out;
  while (static_cast<long long>(out.size()) < max_items) {
    Word value;
    Witness wit;
    const auto st = stream.step(&value, &wit);
    if (st == MemberStream::Status::Exhausted) break;
    out.emplace_back(std::move(value), std::move(wit));
  }
  return out;
}

std::vector<SeparatingCertificate> search_separator(const DecisionInstance& inst, int max_degree,
                                                    long long max_items, HomCache* cache) {
  HomCache local;
  HomCache& c = cache != nullptr ? *cache : local;
  Budget b;
  b.max_degree = max_degree;
  SeparatorStream stream(inst, b, c);
  std::vector<SeparatingCertificate> out;
  while (static_cast<long long>(out.size()) < max_items) {
    SeparatingCertificate cert;
    const auto st = stream.step(&cert);
    if (st == SeparatorStream::Status::Exhausted) break;
    if (st == SeparatorStream::Status::Hit) out.push_back(std::move(cert));
  }
  return out;
}

}  // namespace conjsep
