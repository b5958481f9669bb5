#include "conjsep/stallings.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace conjsep {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  // Returns the surviving representative.
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent[static_cast<size_t>(b)] = a;
    return a;
  }
};

}  // namespace

StallingsGraph StallingsGraph::fold(int rank, const std::vector<Word>& gens) {
  // Petal construction, then fold to a fixpoint: merge states whenever two
  // edges share a label and a source, or a label and a target.
  int n = 1;
  std::vector<std::tuple<int, int, int>> edges;  // src --gen--> dst
  for (const Word& g : gens) {
    if (g.empty()) continue;
    int cur = 0;
    for (int i = 0; i < g.size(); ++i) {
      const int nxt = (i == g.size() - 1) ? 0 : n++;
      const Letter l = g.at(i);
      if (is_positive(l))
        edges.emplace_back(cur, gen_of(l), nxt);
      else
        edges.emplace_back(nxt, gen_of(l), cur);
      cur = nxt;
    }
  }

  UnionFind uf(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [s, g, t] : edges) {
      s = uf.find(s);
      t = uf.find(t);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::map<std::pair<int, int>, int> by_src, by_dst;
    for (auto [s, g, t] : edges) {
      auto [it, fresh] = by_src.emplace(std::make_pair(s, g), t);
      if (!fresh && it->second != t) {
        uf.unite(it->second, t);
        changed = true;
        break;
      }
      auto [it2, fresh2] = by_dst.emplace(std::make_pair(t, g), s);
      if (!fresh2 && it2->second != s) {
        uf.unite(it2->second, s);
        changed = true;
        break;
      }
    }
  }

  std::vector<int> remap(static_cast<size_t>(n), -1);
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (uf.find(i) == i) remap[static_cast<size_t>(i)] = count++;
  std::vector<std::tuple<int, int, int>> pos;
  for (auto [s, g, t] : edges)
    pos.emplace_back(remap[static_cast<size_t>(s)], g, remap[static_cast<size_t>(t)]);
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  return from_edges(rank, count, pos, remap[static_cast<size_t>(uf.find(0))]);
}

StallingsGraph StallingsGraph::from_edges(int rank, int states,
                                          const std::vector<std::tuple<int, int, int>>& pos_edges,
                                          int base) {
  StallingsGraph g;
  g.rank_ = rank;
  g.next_.assign(static_cast<size_t>(states), std::vector<int>(static_cast<size_t>(rank), -1));
  g.prev_.assign(static_cast<size_t>(states), std::vector<int>(static_cast<size_t>(rank), -1));
  for (auto [s, gen, t] : pos_edges) {
    g.next_[static_cast<size_t>(s)][static_cast<size_t>(gen)] = t;
    g.prev_[static_cast<size_t>(t)][static_cast<size_t>(gen)] = s;
  }
  g.trim_core(base);
  return g;
}

void StallingsGraph::trim_core(int base) {
  // Iteratively delete non-basepoint states of total degree <= 1.
  const int n = num_states();
  std::vector<bool> dead(static_cast<size_t>(n), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (v == base || dead[static_cast<size_t>(v)]) continue;
      int deg = 0;
      for (int g = 0; g < rank_; ++g) {
        int t = next_[static_cast<size_t>(v)][static_cast<size_t>(g)];
        if (t >= 0 && !dead[static_cast<size_t>(t)]) ++deg;
        t = prev_[static_cast<size_t>(v)][static_cast<size_t>(g)];
        if (t >= 0 && !dead[static_cast<size_t>(t)]) ++deg;
      }
      if (deg <= 1) {
        dead[static_cast<size_t>(v)] = true;
        changed = true;
      }
    }
  }
  for (int v = 0; v < n; ++v)
    for (int g = 0; g < rank_; ++g) {
      int& t = next_[static_cast<size_t>(v)][static_cast<size_t>(g)];
      if (t >= 0 && (dead[static_cast<size_t>(t)] || dead[static_cast<size_t>(v)])) t = -1;
      int& p = prev_[static_cast<size_t>(v)][static_cast<size_t>(g)];
      if (p >= 0 && (dead[static_cast<size_t>(p)] || dead[static_cast<size_t>(v)])) p = -1;
    }
  canonicalize(base);
}

void StallingsGraph::canonicalize(int base) {
  const int n = num_states();
  std::vector<int> order(static_cast<size_t>(n), -1);
  std::deque<int> queue{base};
  order[static_cast<size_t>(base)] = 0;
  int count = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int k = 0; k < 2 * rank_; ++k) {
      const Letter l = letter_at_order(k);
      const int t = step(v, l);
      if (t >= 0 && order[static_cast<size_t>(t)] < 0) {
        order[static_cast<size_t>(t)] = count++;
        queue.push_back(t);
      }
    }
  }
  std::vector<std::vector<int>> nn(static_cast<size_t>(count),
                                   std::vector<int>(static_cast<size_t>(rank_), -1));
  std::vector<std::vector<int>> pp = nn;
  for (int v = 0; v < n; ++v) {
    if (order[static_cast<size_t>(v)] < 0) continue;
    for (int g = 0; g < rank_; ++g) {
      const int t = next_[static_cast<size_t>(v)][static_cast<size_t>(g)];
      if (t >= 0 && order[static_cast<size_t>(t)] >= 0) {
        nn[static_cast<size_t>(order[static_cast<size_t>(v)])][static_cast<size_t>(g)] =
            order[static_cast<size_t>(t)];
        pp[static_cast<size_t>(order[static_cast<size_t>(t)])][static_cast<size_t>(g)] =
            order[static_cast<size_t>(v)];
      }
    }
  }
  next_ = std::move(nn);
  prev_ = std::move(pp);
}

int StallingsGraph::step(int state, Letter l) const {
  const int g = gen_of(l);
  return is_positive(l) ? next_[static_cast<size_t>(state)][static_cast<size_t>(g)]
                        : prev_[static_cast<size_t>(state)][static_cast<size_t>(g)];
}

bool StallingsGraph::contains(const Word& w) const {
  int s = basepoint();
  for (Letter l : w.letters()) {
    s = step(s, l);
    if (s < 0) return false;
  }
  return s == basepoint();
}

bool StallingsGraph::complete() const {
  for (int v = 0; v < num_states(); ++v)
    for (int g = 0; g < rank_; ++g)
      if (next_[static_cast<size_t>(v)][static_cast<size_t>(g)] < 0 ||
          prev_[static_cast<size_t>(v)][static_cast<size_t>(g)] < 0)
        return false;
  return true;
}

std::optional<std::pair<int, StallingsGraph::Transversal>> StallingsGraph::index_and_transversal()
    const {
  if (!complete()) return std::nullopt;
  const int n = num_states();
  Transversal t;
  t.reps.assign(static_cast<size_t>(n), Word());
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::deque<int> queue{basepoint()};
  seen[0] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int k = 0; k < 2 * rank_; ++k) {
      const Letter l = letter_at_order(k);
      const int u = step(v, l);
      if (u >= 0 && !seen[static_cast<size_t>(u)]) {
        seen[static_cast<size_t>(u)] = true;
        std::vector<Letter> ls = t.reps[static_cast<size_t>(v)].letters();
        ls.push_back(l);
        t.reps[static_cast<size_t>(u)] = Word(std::move(ls));
        queue.push_back(u);
      }
    }
  }
  return std::make_pair(n, std::move(t));
}

int StallingsGraph::coset_of(const Word& w) const {
  int s = basepoint();
  for (Letter l : w.letters()) {
    s = step(s, l);
    if (s < 0) throw capability_error("coset_of requires a complete graph");
  }
  return s;
}

std::vector<Word> StallingsGraph::schreier_generators(const Transversal& t) const {
  std::vector<Word> out;
  for (int i = 0; i < num_states(); ++i) {
    for (int g = 0; g < rank_; ++g) {
      const int j = next_[static_cast<size_t>(i)][static_cast<size_t>(g)];
      if (j < 0) throw capability_error("Schreier generators need finite index");
      const Word w =
          t.reps[static_cast<size_t>(i)] * Word({g + 1}) * t.reps[static_cast<size_t>(j)].inverse();
      if (!w.empty() && std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
  }
  return out;
}

std::vector<Word> StallingsGraph::loops_of_length(int len) const {
  std::vector<Word> out;
  if (len == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<Letter> cur;
  auto rec = [&](auto&& self, int state, int depth) -> void {
    if (depth == len) {
      if (state == basepoint()) out.push_back(Word(cur));
      return;
    }
    for (int k = 0; k < 2 * rank_; ++k) {
      const Letter l = letter_at_order(k);
      if (!cur.empty() && cur.back() == inverse_letter(l)) continue;
      const int t = step(state, l);
      if (t < 0) continue;
      cur.push_back(l);
      self(self, t, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, basepoint(), 0);
  return out;
}

std::vector<Word> StallingsGraph::loops_up_to(int max_len) const {
  std::vector<Word> out;
  for (int len = 0; len <= max_len; ++len) {
    auto v = loops_of_length(len);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<std::tuple<int, int, int>> StallingsGraph::positive_edges() const {
  std::vector<std::tuple<int, int, int>> out;
  for (int v = 0; v < num_states(); ++v)
    for (int g = 0; g < rank_; ++g)
      if (next_[static_cast<size_t>(v)][static_cast<size_t>(g)] >= 0)
        out.emplace_back(v, g, next_[static_cast<size_t>(v)][static_cast<size_t>(g)]);
  return out;
}

StallingsGraph intersect(const StallingsGraph& g1, const StallingsGraph& g2) {
  if (g1.rank() != g2.rank()) throw input_error("rank mismatch in intersection");
  const int rank = g1.rank();
  std::map<std::pair<int, int>, int> id;
  std::deque<std::pair<int, int>> queue;
  const std::pair<int, int> start{g1.basepoint(), g2.basepoint()};
  id[start] = 0;
  queue.push_back(start);
  std::vector<std::tuple<int, int, int>> pos;
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    const int src = id[{a, b}];
    for (int g = 0; g < rank; ++g) {
      const int ta = g1.step(a, g + 1);
      const int tb = g2.step(b, g + 1);
      if (ta < 0 || tb < 0) continue;
      auto [it, fresh] = id.emplace(std::make_pair(ta, tb), static_cast<int>(id.size()));
      if (fresh) queue.push_back({ta, tb});
      pos.emplace_back(src, g, it->second);
    }
  }
  return StallingsGraph::from_edges(rank, static_cast<int>(id.size()), pos, 0);
}

}  // namespace conjsep
