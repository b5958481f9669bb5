#include "conjsep/quotients.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace conjsep {

std::string Presentation::key() const {
  std::ostringstream os;
  os << alphabet.rank() << ':';
  for (int i = 0; i < alphabet.rank(); ++i) os << alphabet.name(i);
  for (const Word& r : relators) os << '|' << r.str(alphabet);
  return os.str();
}

Perm FiniteHom::apply(const Word& w) const {
  Perm p = Perm::identity(degree);
  for (Letter l : w.letters()) {
    const Perm& g = images[static_cast<size_t>(gen_of(l))];
    p = p * (is_positive(l) ? g : g.inverse());
  }
  return p;
}

bool FiniteHom::satisfies(const std::vector<Word>& relators) const {
  for (const Word& r : relators)
    if (!apply(r).is_identity()) return false;
  return true;
}

long long FiniteHom::image_order(long long cap) const {
  const auto elems = subgroup_elements(images, cap);
  return elems.empty() ? cap + 1 : static_cast<long long>(elems.size());
}

HomEnumerator::HomEnumerator(Presentation p, int degree) : pres_(std::move(p)), degree_(degree) {
  if (degree < 1) throw input_error("hom degree must be >= 1");
  Perm cur = Perm::identity(degree);
  std::vector<uint8_t> img = cur.images();
  do {
    perms_.push_back(Perm(img));
  } while (std::next_permutation(img.begin(), img.end()));
  idx_.assign(static_cast<size_t>(pres_.alphabet.rank()), 0);
  // A relator can be checked once all generators it mentions are assigned.
  check_.assign(static_cast<size_t>(pres_.alphabet.rank()), {});
  for (size_t r = 0; r < pres_.relators.size(); ++r) {
    int maxg = -1;
    for (Letter l : pres_.relators[r].letters()) maxg = std::max(maxg, gen_of(l));
    if (maxg < 0) continue;  // trivial relator
    check_[static_cast<size_t>(maxg)].push_back(static_cast<int>(r));
  }
}

bool HomEnumerator::partial_ok(int depth) const {
  if (check_[static_cast<size_t>(depth)].empty()) return true;
  FiniteHom h;
  h.degree = degree_;
  const int rank = pres_.alphabet.rank();
  for (int i = 0; i <= depth; ++i)
    h.images.push_back(perms_[static_cast<size_t>(idx_[static_cast<size_t>(i)])]);
  for (int i = depth + 1; i < rank; ++i) h.images.push_back(Perm::identity(degree_));
  for (int r : check_[static_cast<size_t>(depth)])
    if (!h.apply(pres_.relators[static_cast<size_t>(r)]).is_identity()) return false;
  return true;
}

FiniteHom HomEnumerator::make_current() const {
  FiniteHom h;
  h.degree = degree_;
  for (size_t i = 0; i < idx_.size(); ++i) h.images.push_back(perms_[static_cast<size_t>(idx_[i])]);
  return h;
}

std::optional<FiniteHom> HomEnumerator::next() {
  if (done_) return std::nullopt;
  const int rank = pres_.alphabet.rank();
  const int n = static_cast<int>(perms_.size());
  int depth;
  if (first_) {
    first_ = false;
    depth = 0;
    while (depth < rank && partial_ok(depth)) ++depth;
    if (depth == rank) return make_current();
    // idx_[depth] == 0 failed; advance it below.
  } else {
    depth = rank - 1;  // last emission was valid; advance its final slot
  }
  while (true) {
    bool moved = false;
    while (idx_[static_cast<size_t>(depth)] + 1 < n) {
      ++idx_[static_cast<size_t>(depth)];
      if (partial_ok(depth)) {
        moved = true;
        break;
      }
    }
    if (!moved) {
      idx_[static_cast<size_t>(depth)] = 0;
      --depth;
      if (depth < 0) {
        done_ = true;
        return std::nullopt;
      }
      continue;
    }
    ++depth;
    while (depth < rank) {
      idx_[static_cast<size_t>(depth)] = 0;
      if (!partial_ok(depth)) break;
      ++depth;
    }
    if (depth == rank) return make_current();
  }
}

std::vector<FiniteHom> enumerate_all_homs(const Presentation& p, int degree) {
  HomEnumerator e(p, degree);
  std::vector<FiniteHom> out;
  while (auto h = e.next()) out.push_back(std::move(*h));
  return out;
}

std::vector<Perm> subgroup_elements(const std::vector<Perm>& gens, long long cap) {
  const int degree = gens.empty() ? 1 : gens[0].degree();
  std::vector<Perm> elems{Perm::identity(degree)};
  std::unordered_set<Perm, PermHash> seen{elems[0]};
  std::deque<Perm> queue{elems[0]};
  while (!queue.empty()) {
    const Perm p = std::move(queue.front());
    queue.pop_front();
    for (const Perm& g : gens) {
      const Perm q = p * g;
      if (seen.insert(q).second) {
        if (static_cast<long long>(elems.size()) + 1 > cap) return {};
        elems.push_back(q);
        queue.push_back(q);
      }
    }
  }
  return elems;
}

int InducedAut::find(const Perm& p) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == p) return static_cast<int>(i);
  return -1;
}

Perm InducedAut::apply(const Perm& p) const {
  const int i = find(p);
  if (i < 0) throw input_error("element not in the image subgroup");
  return elements[static_cast<size_t>(phibar[static_cast<size_t>(i)])];
}

std::optional<InducedAut> induced_automorphism(const FiniteHom& psi, const Automorphism& phi) {
  const int rank = static_cast<int>(psi.images.size());
  std::vector<Perm> gen_img(static_cast<size_t>(rank)), gen_img_phi(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    gen_img[static_cast<size_t>(i)] = psi.images[static_cast<size_t>(i)];
    gen_img_phi[static_cast<size_t>(i)] = psi.apply(phi.fwd[static_cast<size_t>(i)]);
  }
  // BFS over the image subgroup, propagating the claimed image along tree
  // edges and checking it on every other edge. An inconsistent edge means
  // the assignment a_i psi -> (a_i phi) psi does not extend.
  InducedAut ia;
  std::unordered_map<Perm, int, PermHash> index;
  std::vector<Perm> claimed;
  const Perm id = Perm::identity(psi.degree);
  ia.elements.push_back(id);
  claimed.push_back(id);
  index[id] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int i = 0; i < rank; ++i) {
      const Perm g = ia.elements[static_cast<size_t>(cur)] * gen_img[static_cast<size_t>(i)];
      const Perm h = claimed[static_cast<size_t>(cur)] * gen_img_phi[static_cast<size_t>(i)];
      auto it = index.find(g);
      if (it == index.end()) {
        index[g] = static_cast<int>(ia.elements.size());
        ia.elements.push_back(g);
        claimed.push_back(h);
        queue.push_back(static_cast<int>(ia.elements.size()) - 1);
      } else if (claimed[static_cast<size_t>(it->second)] != h) {
        return std::nullopt;  // not well defined
      }
    }
  }
  // Convert images to indices; they lie in the subgroup by construction.
  ia.phibar.resize(ia.elements.size());
  for (size_t i = 0; i < ia.elements.size(); ++i) {
    auto it = index.find(claimed[i]);
    if (it == index.end()) return std::nullopt;
    ia.phibar[i] = it->second;
  }
  // Bijectivity of the induced map on the image subgroup.
  std::vector<bool> hit(ia.elements.size(), false);
  for (int v : ia.phibar) {
    if (hit[static_cast<size_t>(v)]) return std::nullopt;
    hit[static_cast<size_t>(v)] = true;
  }
  return ia;
}

std::string set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::Alpha: return "alpha";
    case SetKind::Tcc: return "tcc";
    case SetKind::Bcc: return "bcc";
    case SetKind::Orbit: return "orbit";
  }
  return "?";
}

SetKind set_kind_from_name(const std::string& s) {
  if (s == "alpha") return SetKind::Alpha;
  if (s == "tcc") return SetKind::Tcc;
  if (s == "bcc") return SetKind::Bcc;
  if (s == "orbit") return SetKind::Orbit;
  throw input_error("unknown set kind: " + s);
}

namespace {

// Image of K itself under h (before closing under the kind operator).
std::vector<Perm> base_image(const FiniteHom& h, const SetSpec& K) {
  std::set<Perm> out;
  switch (K.tag) {
    case SetSpec::Tag::Fin: {
      for (const Word& w : K.fin) out.insert(h.apply(w));
      break;
    }
    case SetSpec::Tag::Coset: {
      std::vector<Perm> gens;
      for (const Word& w : K.coset.gens) gens.push_back(h.apply(w));
      const auto sub = subgroup_elements(gens, 1000000);
      const Perm r = h.apply(K.coset.rep);
      for (const Perm& p : sub) out.insert(p * r);
      break;
    }
    case SetSpec::Tag::Rat: {
      // BFS over (state, perm) pairs.
      std::set<std::pair<int, Perm>> seen;
      std::deque<std::pair<int, Perm>> queue;
      const Perm id = Perm::identity(h.degree);
      for (int i : K.rat.initial) {
        if (seen.insert({i, id}).second) queue.push_back({i, id});
      }
      const std::set<int> fin(K.rat.finals.begin(), K.rat.finals.end());
      while (!queue.empty()) {
        auto [s, p] = queue.front();
        queue.pop_front();
        if (fin.count(s)) out.insert(p);
        for (auto [src, l, dst] : K.rat.trans) {
          if (src != s) continue;
          Perm q = p;
          if (l != 0) {
            const Perm& g = h.images[static_cast<size_t>(gen_of(l))];
            q = p * (is_positive(l) ? g : g.inverse());
          }
          if (seen.insert({dst, q}).second) queue.push_back({dst, q});
        }
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<Perm> image_of_set(const FiniteHom& h, const InducedAut* phibar, SetKind kind,
                               const SetSpec& K, const Automorphism* phi,
                               const CosetSpec* twist_constraint) {
  if ((kind == SetKind::Bcc || kind == SetKind::Orbit) && (phibar == nullptr || phi == nullptr))
    throw input_error("orbit set kinds need an induced automorphism");
  if (kind == SetKind::Tcc && phi == nullptr)
    throw input_error("twisted set kinds need the automorphism");
  if (twist_constraint != nullptr && kind != SetKind::Tcc)
    throw input_error("conjugator constraints only apply to the twisted kind");
  std::set<Perm> S;
  for (const Perm& p : base_image(h, K)) S.insert(p);

  auto close_under = [&](auto&& step) {
    std::deque<Perm> queue(S.begin(), S.end());
    while (!queue.empty()) {
      const Perm p = std::move(queue.front());
      queue.pop_front();
      step(p, [&](const Perm& q) {
        if (S.insert(q).second) queue.push_back(q);
      });
    }
  };

  const int rank = static_cast<int>(h.images.size());
  switch (kind) {
    case SetKind::Alpha: {
      close_under([&](const Perm& p, auto&& add) {
        for (int i = 0; i < rank; ++i) {
          const Perm& g = h.images[static_cast<size_t>(i)];
          add(g.inverse() * p * g);
          add(g * p * g.inverse());
        }
      });
      break;
    }
    case SetKind::Tcc: {
      if (twist_constraint == nullptr) {
        // The map x -> ((x phi) h, x h) is multiplicative, so closing under
        // the generator pairs reaches every twisted conjugate image.
        close_under([&](const Perm& p, auto&& add) {
          for (int i = 0; i < rank; ++i) {
            const Perm& g = h.images[static_cast<size_t>(i)];
            const Perm gph = h.apply(phi->fwd[static_cast<size_t>(i)]);
            add(gph.inverse() * p * g);
            add(gph * p * g.inverse());
          }
        });
      } else {
        // Conjugators restricted to H z: pairs ((x phi) h, x h) over x in Hz
        // form a coset of the pair subgroup of H.
        std::vector<std::pair<Perm, Perm>> pair_gens;
        for (const Word& w : twist_constraint->gens)
          pair_gens.emplace_back(h.apply(phi->apply(w)), h.apply(w));
        std::set<std::pair<Perm, Perm>> pair_group{{Perm::identity(h.degree), Perm::identity(h.degree)}};
        std::deque<std::pair<Perm, Perm>> queue(pair_group.begin(), pair_group.end());
        while (!queue.empty()) {
          auto [a, b] = queue.front();
          queue.pop_front();
          for (auto& [ga, gb] : pair_gens) {
            const std::pair<Perm, Perm> nx{a * ga, b * gb};
            if (pair_group.insert(nx).second) queue.push_back(nx);
            const std::pair<Perm, Perm> nx2{a * ga.inverse(), b * gb.inverse()};
            if (pair_group.insert(nx2).second) queue.push_back(nx2);
          }
        }
        const Perm za = h.apply(phi->apply(twist_constraint->rep));
        const Perm zb = h.apply(twist_constraint->rep);
        std::set<Perm> out;
        for (const Perm& s : S)
          for (const auto& [a, b] : pair_group) out.insert((a * za).inverse() * s * (b * zb));
        return {out.begin(), out.end()};
      }
      break;
    }
    case SetKind::Orbit: {
      close_under([&](const Perm& p, auto&& add) { add(phibar->apply(p)); });
      break;
    }
    case SetKind::Bcc: {
      close_under([&](const Perm& p, auto&& add) {
        add(phibar->apply(p));
        for (int i = 0; i < rank; ++i) {
          const Perm& g = h.images[static_cast<size_t>(i)];
          add(g.inverse() * p * g);
          add(g * p * g.inverse());
        }
      });
      break;
    }
  }
  return {S.begin(), S.end()};
}

bool verify_separation(const SeparatingCertificate& c) {
  try {
    if (!c.hom.satisfies(c.pres.relators)) return false;
    if (static_cast<int>(c.hom.images.size()) != c.pres.alphabet.rank()) return false;
    std::optional<InducedAut> ia;
    const Automorphism* phi = nullptr;
    if (c.kind != SetKind::Alpha) {
      if (!c.aut.has_value()) return false;
      phi = &*c.aut;
      if (c.kind == SetKind::Orbit || c.kind == SetKind::Bcc) {
        ia = induced_automorphism(c.hom, *phi);
        if (!ia.has_value()) return false;
      }
    }
    const auto img = image_of_set(c.hom, ia ? &*ia : nullptr, c.kind, c.set, phi,
                                  c.twist_constraint ? &*c.twist_constraint : nullptr);
    if (img != c.image_audit) return false;
    const Perm y = c.hom.apply(c.excluded);
    return std::find(img.begin(), img.end(), y) == img.end();
  } catch (const std::exception&) {
    return false;
  }
}

CoreResult fully_invariant_core(int rank, int max_order, long long state_budget) {
  if (max_order < 1) throw input_error("core bound must be >= 1");
  // Whole group for the trivial bound.
  std::vector<Word> all_gens;
  for (int i = 0; i < rank; ++i) all_gens.push_back(Word({i + 1}));
  StallingsGraph acc = StallingsGraph::fold(rank, all_gens);
  if (max_order == 1) {
    auto it = acc.index_and_transversal();
    return {acc, it->second};
  }
  Presentation free_p;
  free_p.alphabet = Alphabet(rank);
  // Kernels of homomorphisms onto groups of order <= m are exactly kernels
  // of homomorphisms into Sym(m) whose image has order <= m.
  const auto homs = enumerate_all_homs(free_p, max_order);
  std::set<std::string> seen_kernels;
  for (const FiniteHom& h : homs) {
    if (h.image_order(max_order) > max_order) continue;
    // Coset graph of the kernel: states = image subgroup, right action.
    const auto elems = subgroup_elements(h.images, max_order);
    std::unordered_map<Perm, int, PermHash> idx;
    for (size_t i = 0; i < elems.size(); ++i) idx[elems[i]] = static_cast<int>(i);
    std::vector<std::tuple<int, int, int>> pos;
    for (size_t i = 0; i < elems.size(); ++i)
      for (int g = 0; g < rank; ++g)
        pos.emplace_back(static_cast<int>(i), g, idx[elems[i] * h.images[static_cast<size_t>(g)]]);
    const StallingsGraph ker = StallingsGraph::from_edges(rank, static_cast<int>(elems.size()), pos, 0);
    std::ostringstream sig;
    for (auto [s, g, t] : ker.positive_edges()) sig << s << ',' << g << ',' << t << ';';
    if (!seen_kernels.insert(sig.str()).second) continue;
    acc = intersect(acc, ker);
    if (acc.num_states() > state_budget)
      throw resource_error("fully invariant core exceeded state budget at order " +
                           std::to_string(max_order));
  }
  auto it = acc.index_and_transversal();
  if (!it.has_value()) throw resource_error("core intersection unexpectedly infinite");
  return {acc, it->second};
}

FiniteHom fully_invariant_core_hom(const Presentation& p, int max_order, int degree_budget) {
  const int rank = p.alphabet.rank();
  FiniteHom joint;
  joint.degree = 1;
  joint.images.assign(static_cast<size_t>(rank), Perm::identity(1));
  const auto homs = enumerate_all_homs(p, std::max(1, max_order));
  std::vector<const FiniteHom*> used;
  int total = 1;
  for (const FiniteHom& h : homs) {
    if (h.image_order(max_order) > max_order) continue;
    used.push_back(&h);
    total += h.degree;
  }
  if (total > degree_budget) throw resource_error("core hom exceeds degree budget");
  joint.degree = total;
  for (int g = 0; g < rank; ++g) {
    std::vector<uint8_t> img(static_cast<size_t>(total));
    img[0] = 0;
    int off = 1;
    for (const FiniteHom* h : used) {
      for (int x = 0; x < h->degree; ++x)
        img[static_cast<size_t>(off + x)] =
            static_cast<uint8_t>(off + h->images[static_cast<size_t>(g)].apply(x));
      off += h->degree;
    }
    joint.images[static_cast<size_t>(g)] = Perm(std::move(img));
  }
  return joint;
}

std::pair<FiniteHom, InducedAut> invariant_refine(const Presentation& p, const FiniteHom& psi,
                                                  const Automorphism& phi, int degree_budget) {
  // The refinement may return psi itself when its kernel is already
  // invariant enough for the induced map to exist.
  if (auto ia = induced_automorphism(psi, phi)) return {psi, std::move(*ia)};
  const long long m = psi.image_order(10000);
  if (m > 10000) throw resource_error("image too large to refine");
  const FiniteHom pi = fully_invariant_core_hom(p, static_cast<int>(m), degree_budget);
  auto ia = induced_automorphism(pi, phi);
  if (!ia.has_value())
    throw resource_error("induced automorphism missing on a fully invariant core");
  return {pi, std::move(*ia)};
}

const std::vector<FiniteHom>& HomCache::homs(const Presentation& p, int degree) {
  const auto key = std::make_pair(p.key(), degree);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, enumerate_all_homs(p, degree)).first;
  return it->second;
}

// --- JSON serialization -----------------------------------------------

namespace {
nlohmann::json set_to_json(const SetSpec& s, const Alphabet& a) {
  nlohmann::json j;
  switch (s.tag) {
    case SetSpec::Tag::Fin: {
      j["kind"] = "fin";
      auto arr = nlohmann::json::array();
      for (const Word& w : s.fin) arr.push_back(w.str(a));
      j["elements"] = arr;
      break;
    }
    case SetSpec::Tag::Coset: {
      j["kind"] = "coset";
      auto arr = nlohmann::json::array();
      for (const Word& w : s.coset.gens) arr.push_back(w.str(a));
      j["gens"] = arr;
      j["rep"] = s.coset.rep.str(a);
      break;
    }
    case SetSpec::Tag::Rat: {
      j["kind"] = "rat";
      j["nfa"] = nfa_to_text(s.rat, a);
      break;
    }
  }
  return j;
}

SetSpec set_from_json(const nlohmann::json& j, const Alphabet& a) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fin") {
    std::vector<Word> ws;
    for (const auto& e : j.at("elements")) ws.push_back(Word::parse(e.get<std::string>(), a));
    return SetSpec::finite(std::move(ws));
  }
  if (kind == "coset") {
    std::vector<Word> gens;
    for (const auto& e : j.at("gens")) gens.push_back(Word::parse(e.get<std::string>(), a));
    return SetSpec::coset_of(std::move(gens), Word::parse(j.at("rep").get<std::string>(), a));
  }
  if (kind == "rat") return SetSpec::rational(nfa_from_text(j.at("nfa").get<std::string>(), a));
  throw input_error("unknown set kind in json");
}
}  // namespace

std::string SeparatingCertificate::to_json() const {
  nlohmann::json j;
  j["context"] = context_desc;
  std::string names;
  for (int i = 0; i < pres.alphabet.rank(); ++i) names.push_back(pres.alphabet.name(i));
  j["alphabet"] = names;
  auto rel = nlohmann::json::array();
  for (const Word& r : pres.relators) rel.push_back(r.str(pres.alphabet));
  j["relators"] = rel;
  j["degree"] = hom.degree;
  nlohmann::json imgs;
  for (int i = 0; i < pres.alphabet.rank(); ++i)
    imgs[std::string(1, pres.alphabet.name(i))] = hom.images[static_cast<size_t>(i)].cycle_str();
  j["images"] = imgs;
  if (aut.has_value()) {
    auto fw = nlohmann::json::array(), bw = nlohmann::json::array();
    for (const Word& w : aut->fwd) fw.push_back(w.str(pres.alphabet));
    for (const Word& w : aut->bwd) bw.push_back(w.str(pres.alphabet));
    j["aut"] = {{"fwd", fw}, {"bwd", bw}};
  }
  j["kind"] = set_kind_name(kind);
  j["set"] = set_to_json(set, pres.alphabet);
  if (twist_constraint.has_value()) {
    auto arr = nlohmann::json::array();
    for (const Word& w : twist_constraint->gens) arr.push_back(w.str(pres.alphabet));
    j["constraint"] = {{"gens", arr}, {"rep", twist_constraint->rep.str(pres.alphabet)}};
  }
  j["excluded"] = excluded.str(pres.alphabet);
  auto audit = nlohmann::json::array();
  for (const Perm& p : image_audit) audit.push_back(p.cycle_str());
  j["image_set"] = audit;
  return j.dump(2);
}

SeparatingCertificate SeparatingCertificate::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SeparatingCertificate c;
  c.context_desc = j.value("context", "");
  const std::string names = j.at("alphabet").get<std::string>();
  c.pres.alphabet = Alphabet(static_cast<int>(names.size()), names);
  for (const auto& r : j.at("relators"))
    c.pres.relators.push_back(Word::parse(r.get<std::string>(), c.pres.alphabet));
  c.hom.degree = j.at("degree").get<int>();
  for (int i = 0; i < c.pres.alphabet.rank(); ++i) {
    const std::string key(1, c.pres.alphabet.name(i));
    c.hom.images.push_back(Perm::parse_cycles(j.at("images").at(key).get<std::string>(), c.hom.degree));
  }
  if (j.contains("aut")) {
    Automorphism a;
    for (const auto& w : j.at("aut").at("fwd"))
      a.fwd.push_back(Word::parse(w.get<std::string>(), c.pres.alphabet));
    for (const auto& w : j.at("aut").at("bwd"))
      a.bwd.push_back(Word::parse(w.get<std::string>(), c.pres.alphabet));
    c.aut = std::move(a);
  }
  c.kind = set_kind_from_name(j.at("kind").get<std::string>());
  c.set = set_from_json(j.at("set"), c.pres.alphabet);
  if (j.contains("constraint")) {
    CosetSpec cs;
    for (const auto& w : j.at("constraint").at("gens"))
      cs.gens.push_back(Word::parse(w.get<std::string>(), c.pres.alphabet));
    cs.rep = Word::parse(j.at("constraint").at("rep").get<std::string>(), c.pres.alphabet);
    c.twist_constraint = std::move(cs);
  }
  c.excluded = Word::parse(j.at("excluded").get<std::string>(), c.pres.alphabet);
  for (const auto& p : j.at("image_set"))
    c.image_audit.push_back(Perm::parse_cycles(p.get<std::string>(), c.hom.degree));
  return c;
}

}  // namespace conjsep
