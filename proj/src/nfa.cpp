#include "conjsep/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace conjsep {

Nfa nfa_from_words(int rank, const std::vector<Word>& ws) {
  Nfa a;
  a.rank = rank;
  a.states = 1;
  a.initial = {0};
  for (const Word& w : ws) {
    int cur = 0;
    for (int i = 0; i < w.size(); ++i) {
      const int nxt = a.states++;
      a.trans.emplace_back(cur, w.at(i), nxt);
      cur = nxt;
    }
    a.finals.push_back(cur);
  }
  std::sort(a.finals.begin(), a.finals.end());
  a.finals.erase(std::unique(a.finals.begin(), a.finals.end()), a.finals.end());
  return a;
}

Nfa nfa_from_stallings(const StallingsGraph& g) {
  Nfa a;
  a.rank = g.rank();
  a.states = g.num_states();
  a.initial = {g.basepoint()};
  a.finals = {g.basepoint()};
  for (auto [s, gen, t] : g.positive_edges()) {
    a.trans.emplace_back(s, gen + 1, t);
    a.trans.emplace_back(t, -(gen + 1), s);
  }
  return a;
}

Nfa nfa_coset(int rank, const std::vector<Word>& gens, const Word& rep) {
  Nfa a;
  a.rank = rank;
  a.states = 1;
  a.initial = {0};
  for (const Word& g : gens) {
    int cur = 0;
    for (int i = 0; i < g.size(); ++i) {
      const int nxt = (i == g.size() - 1) ? 0 : a.states++;
      a.trans.emplace_back(cur, g.at(i), nxt);
      cur = nxt;
    }
    // Petal for the inverse as well, so spellings cover the subgroup.
    cur = 0;
    const Word gi = g.inverse();
    for (int i = 0; i < gi.size(); ++i) {
      const int nxt = (i == gi.size() - 1) ? 0 : a.states++;
      a.trans.emplace_back(cur, gi.at(i), nxt);
      cur = nxt;
    }
  }
  int cur = 0;
  for (int i = 0; i < rep.size(); ++i) {
    const int nxt = a.states++;
    a.trans.emplace_back(cur, rep.at(i), nxt);
    cur = nxt;
  }
  a.finals = {cur};
  return a;
}

Nfa nfa_union(const Nfa& x, const Nfa& y) {
  Nfa a;
  a.rank = std::max(x.rank, y.rank);
  a.states = x.states + y.states;
  a.trans = x.trans;
  for (auto [s, l, t] : y.trans) a.trans.emplace_back(s + x.states, l, t + x.states);
  a.initial = x.initial;
  for (int i : y.initial) a.initial.push_back(i + x.states);
  a.finals = x.finals;
  for (int f : y.finals) a.finals.push_back(f + x.states);
  return a;
}

Nfa nfa_translate(const Nfa& x, const Word& r, bool left) {
  Nfa a = x;
  if (r.empty()) return a;
  if (left) {
    int cur = a.states++;
    const int start = cur;
    for (int i = 0; i < r.size(); ++i) {
      const int nxt = a.states++;
      a.trans.emplace_back(cur, r.at(i), nxt);
      cur = nxt;
    }
    for (int i : x.initial) a.trans.emplace_back(cur, 0, i);
    a.initial = {start};
  } else {
    const int start = a.states++;
    for (int f : x.finals) a.trans.emplace_back(f, 0, start);
    int cur = start;
    for (int i = 0; i < r.size(); ++i) {
      const int nxt = a.states++;
      a.trans.emplace_back(cur, r.at(i), nxt);
      cur = nxt;
    }
    a.finals = {cur};
  }
  return a;
}

Nfa nfa_substitute(const Nfa& x, int new_rank, const std::function<Word(Letter)>& image) {
  Nfa a;
  a.rank = new_rank;
  a.states = x.states;
  a.initial = x.initial;
  a.finals = x.finals;
  for (auto [s, l, t] : x.trans) {
    if (l == 0) {
      a.trans.emplace_back(s, 0, t);
      continue;
    }
    const Word w = image(l);
    if (w.empty()) {
      a.trans.emplace_back(s, 0, t);
      continue;
    }
    int cur = s;
    for (int i = 0; i < w.size(); ++i) {
      const int nxt = (i == w.size() - 1) ? t : a.states++;
      a.trans.emplace_back(cur, w.at(i), nxt);
      cur = nxt;
    }
  }
  return a;
}

namespace {

std::vector<std::vector<int>> eps_closure_table(const Nfa& a) {
  std::vector<std::vector<int>> eps(static_cast<size_t>(a.states));
  for (auto [s, l, t] : a.trans)
    if (l == 0) eps[static_cast<size_t>(s)].push_back(t);
  std::vector<std::vector<int>> closure(static_cast<size_t>(a.states));
  for (int s = 0; s < a.states; ++s) {
    std::vector<bool> seen(static_cast<size_t>(a.states), false);
    std::deque<int> queue{s};
    seen[static_cast<size_t>(s)] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      closure[static_cast<size_t>(s)].push_back(v);
      for (int u : eps[static_cast<size_t>(v)])
        if (!seen[static_cast<size_t>(u)]) {
          seen[static_cast<size_t>(u)] = true;
          queue.push_back(u);
        }
    }
  }
  return closure;
}

std::set<int> closure_of(const std::vector<std::vector<int>>& table, const std::set<int>& in) {
  std::set<int> out;
  for (int s : in) out.insert(table[static_cast<size_t>(s)].begin(), table[static_cast<size_t>(s)].end());
  return out;
}

}  // namespace

bool nfa_accepts(const Nfa& a, const Word& w) {
  const auto table = eps_closure_table(a);
  std::set<int> cur(a.initial.begin(), a.initial.end());
  cur = closure_of(table, cur);
  for (Letter l : w.letters()) {
    std::set<int> next;
    for (auto [s, lab, t] : a.trans)
      if (lab == l && cur.count(s)) next.insert(t);
    cur = closure_of(table, next);
    if (cur.empty()) return false;
  }
  for (int f : a.finals)
    if (cur.count(f)) return true;
  return false;
}

Nfa benois_saturate(const Nfa& a, int state_budget) {
  Nfa out = a;
  if (out.states > state_budget) return out;  // callers fall back to bounded search
  std::set<std::tuple<int, Letter, int>> have(out.trans.begin(), out.trans.end());
  bool changed = true;
  while (changed) {
    changed = false;
    const auto table = eps_closure_table(out);
    // Collect letter transitions once per round.
    std::vector<std::tuple<int, Letter, int>> letters;
    for (auto& tr : out.trans)
      if (std::get<1>(tr) != 0) letters.push_back(tr);
    for (auto [p, l1, q] : letters) {
      for (int q2 : table[static_cast<size_t>(q)]) {
        for (auto [q3, l2, r] : letters) {
          if (q3 != q2 || l2 != inverse_letter(l1)) continue;
          const std::tuple<int, Letter, int> e{p, 0, r};
          if (p != r && !have.count(e)) {
            have.insert(e);
            out.trans.push_back(e);
            changed = true;
          }
          if (p == r) {
            // A cancelling loop: nothing to add, closure already covers it.
          }
        }
      }
    }
  }
  return out;
}

bool rational_member(const Nfa& a, const Word& w) {
  const Nfa sat = benois_saturate(a);
  return nfa_accepts(sat, w);
}

std::vector<Word> nfa_words_up_to(const Nfa& a, int max_len) {
  const auto table = eps_closure_table(a);
  std::vector<Word> out;
  std::set<int> start(a.initial.begin(), a.initial.end());
  start = closure_of(table, start);
  const std::set<int> fin(a.finals.begin(), a.finals.end());
  auto is_final = [&](const std::set<int>& ss) {
    for (int f : fin)
      if (ss.count(f)) return true;
    return false;
  };
  // BFS over the word tree of live prefixes.
  struct Node {
    std::set<int> states;
    std::vector<Letter> word;
  };
  std::deque<Node> queue{{start, {}}};
  if (is_final(start)) out.emplace_back();
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    if (static_cast<int>(n.word.size()) == max_len) continue;
    for (int k = 0; k < 2 * a.rank; ++k) {
      const Letter l = letter_at_order(k);
      std::set<int> next;
      for (auto [s, lab, t] : a.trans)
        if (lab == l && n.states.count(s)) next.insert(t);
      if (next.empty()) continue;
      next = closure_of(table, next);
      Node m;
      m.states = std::move(next);
      m.word = n.word;
      m.word.push_back(l);
      // Spellings are freely reduced on construction; callers work with the
      // group element, so this loses nothing.
      if (is_final(m.states)) out.push_back(Word(m.word));
      queue.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), [](const Word& a_, const Word& b_) { return a_ < b_; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string nfa_to_text(const Nfa& a, const Alphabet& alpha) {
  std::ostringstream os;
  os << "nfa states=" << a.states << " initial=";
  for (size_t i = 0; i < a.initial.size(); ++i) os << (i ? "," : "") << a.initial[i];
  os << " final=";
  for (size_t i = 0; i < a.finals.size(); ++i) os << (i ? "," : "") << a.finals[i];
  os << "\n";
  for (auto [s, l, t] : a.trans) {
    os << s << ' ' << (l == 0 ? '-' : alpha.char_of_letter(l)) << ' ' << t << "\n";
  }
  return os.str();
}

Nfa nfa_from_text(const std::string& text, const Alphabet& alpha) {
  std::istringstream is(text);
  std::string line;
  Nfa a;
  a.rank = alpha.rank();
  bool header = false;
  auto parse_list = [](const std::string& s) {
    std::vector<int> v;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',') {
        if (!cur.empty()) v.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return v;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!header) {
      std::string tag, st, in, fi;
      ls >> tag >> st >> in >> fi;
      if (tag != "nfa" || st.rfind("states=", 0) != 0 || in.rfind("initial=", 0) != 0 ||
          fi.rfind("final=", 0) != 0)
        throw input_error("bad nfa header: " + line);
      a.states = std::stoi(st.substr(7));
      a.initial = parse_list(in.substr(8));
      a.finals = parse_list(fi.substr(6));
      header = true;
      continue;
    }
    int s, t;
    std::string lab;
    if (!(ls >> s >> lab >> t)) throw input_error("bad nfa transition: " + line);
    if (s < 0 || s >= a.states || t < 0 || t >= a.states)
      throw input_error("nfa transition state out of range: " + line);
    const Letter l = lab == "-" ? 0 : alpha.letter_of_char(lab.at(0));
    a.trans.emplace_back(s, l, t);
  }
  if (!header) throw input_error("missing nfa header");
  return a;
}

}  // namespace conjsep
