#include "conjsep/instance_io.hpp"

#include <sstream>

#include "json.hpp"

namespace conjsep {

namespace {

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
  throw input_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                    msg);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

struct LineTokens {
  std::vector<std::string> toks;
  std::vector<int> cols;  // 1-based start column of each token
};

LineTokens tokenize(const std::string& line) {
  LineTokens lt;
  std::string cur;
  int start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    const char c = i < line.size() ? line[i] : ' ';
    if (c == '#') break;
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) {
        lt.toks.push_back(cur);
        lt.cols.push_back(start + 1);
        cur.clear();
      }
    } else {
      if (cur.empty()) start = static_cast<int>(i);
      cur.push_back(c);
    }
  }
  return lt;
}

long long parse_ll(const std::string& s, int line, int col) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) fail_at(line, col, "bad integer '" + s + "'");
    return v;
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    fail_at(line, col, "bad integer '" + s + "'");
  }
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  InstanceFile f;
  bool have_group = false;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const LineTokens lt = tokenize(line);
    const auto& t = lt.toks;
    if (t.empty()) continue;
    auto need = [&](size_t i) -> const std::string& {
      if (i >= t.size()) fail_at(ln, static_cast<int>(line.size()) + 1, "unexpected end of line");
      return t[i];
    };
    if (t[0] == "aut") {
      InstanceFile::AutDecl a;
      a.name = need(1);
      bool in_inverse = false;
      for (size_t i = 2; i < t.size(); ++i) {
        if (t[i] == "inverse") {
          in_inverse = true;
          continue;
        }
        const auto arrow = t[i].find("->");
        if (arrow == std::string::npos) fail_at(ln, lt.cols[i], "expected <gen>-><word>");
        auto& dst = in_inverse ? a.bwd : a.fwd;
        dst.emplace_back(t[i].substr(0, arrow), t[i].substr(arrow + 2));
      }
      f.auts.push_back(std::move(a));
    } else if (t[0] == "via") {
      InstanceFile::ViaDecl v;
      v.aut = need(1);
      if (need(2) != "p") fail_at(ln, lt.cols[2], "expected 'p'");
      v.p = parse_ll(need(3), ln, lt.cols[3]);
      if (need(4) != "delta") fail_at(ln, lt.cols[4], "expected 'delta'");
      v.delta = need(5);
      f.vias.push_back(std::move(v));
    } else if (t[0] == "group") {
      if (have_group) fail_at(ln, lt.cols[0], "duplicate group statement");
      have_group = true;
      const std::string& k = need(1);
      if (k == "free") {
        f.gkind = InstanceFile::GroupKind::Free;
        if (need(2) != "rank") fail_at(ln, lt.cols[2], "expected 'rank'");
        f.rank = static_cast<int>(parse_ll(need(3), ln, lt.cols[3]));
      } else if (k == "fatf") {
        f.gkind = InstanceFile::GroupKind::Fatf;
        if (need(2) != "rank") fail_at(ln, lt.cols[2], "expected 'rank'");
        f.rank = static_cast<int>(parse_ll(need(3), ln, lt.cols[3]));
        if (need(4) != "dim") fail_at(ln, lt.cols[4], "expected 'dim'");
        f.dim = static_cast<int>(parse_ll(need(5), ln, lt.cols[5]));
      } else if (k == "semidirect") {
        f.gkind = InstanceFile::GroupKind::Semidirect;
        f.group_aut = need(2);
      } else if (k == "gphi") {
        f.gkind = InstanceFile::GroupKind::GPhi;
        f.group_aut = need(2);
        if (need(3) != "p") fail_at(ln, lt.cols[3], "expected 'p'");
        f.gphi_p = parse_ll(need(4), ln, lt.cols[4]);
        if (need(5) != "delta") fail_at(ln, lt.cols[5], "expected 'delta'");
        f.gphi_delta = need(6);
      } else if (k == "extension") {
        f.gkind = InstanceFile::GroupKind::Extension;
        f.extension_file = need(2);
      } else {
        fail_at(ln, lt.cols[1], "unknown group kind '" + k + "'");
      }
    } else if (t[0] == "set") {
      InstanceFile::SetDecl s;
      s.kind = need(1);
      if (s.kind == "fin") {
        s.fin = split_commas(need(2));
      } else if (s.kind == "coset") {
        if (need(2) != "gens") fail_at(ln, lt.cols[2], "expected 'gens'");
        s.gens = split_commas(need(3));
        if (need(4) != "rep") fail_at(ln, lt.cols[4], "expected 'rep'");
        s.rep = need(5);
      } else if (s.kind == "rat") {
        s.file = need(2);
      } else {
        fail_at(ln, lt.cols[1], "unknown set kind '" + s.kind + "'");
      }
      f.set = std::move(s);
    } else if (t[0] == "elem") {
      f.elems.emplace_back(need(1), need(2));
    } else if (t[0] == "decide") {
      InstanceFile::DecideDecl d;
      d.kind = need(1);
      if (d.kind != "conj" && d.kind != "twisted" && d.kind != "brinkmann" &&
          d.kind != "brinkconj")
        fail_at(ln, lt.cols[1], "unknown decide kind '" + d.kind + "'");
      if (need(2) != "target") fail_at(ln, lt.cols[2], "expected 'target'");
      d.target = need(3);
      if (t.size() > 4) {
        if (need(4) != "aut") fail_at(ln, lt.cols[4], "expected 'aut'");
        d.aut = need(5);
      }
      f.decide_decl = std::move(d);
    } else if (t[0] == "budget") {
      Budget b;
      if (need(1) != "len") fail_at(ln, lt.cols[1], "expected 'len'");
      b.max_len = static_cast<int>(parse_ll(need(2), ln, lt.cols[2]));
      if (need(3) != "degree") fail_at(ln, lt.cols[3], "expected 'degree'");
      b.max_degree = static_cast<int>(parse_ll(need(4), ln, lt.cols[4]));
      if (need(5) != "steps") fail_at(ln, lt.cols[5], "expected 'steps'");
      b.max_steps = parse_ll(need(6), ln, lt.cols[6]);
      f.budget = b;
    } else {
      fail_at(ln, lt.cols[0], "unknown statement '" + t[0] + "'");
    }
  }
  if (!have_group) throw input_error("instance file has no group statement");
  return f;
}

std::string print_instance(const InstanceFile& f) {
  std::ostringstream os;
  for (const auto& a : f.auts) {
    os << "aut " << a.name;
    for (const auto& [g, w] : a.fwd) os << ' ' << g << "->" << w;
    if (!a.bwd.empty()) {
      os << " inverse";
      for (const auto& [g, w] : a.bwd) os << ' ' << g << "->" << w;
    }
    os << "\n";
  }
  for (const auto& v : f.vias) os << "via " << v.aut << " p " << v.p << " delta " << v.delta << "\n";
  switch (f.gkind) {
    case InstanceFile::GroupKind::Free: os << "group free rank " << f.rank << "\n"; break;
    case InstanceFile::GroupKind::Fatf:
      os << "group fatf rank " << f.rank << " dim " << f.dim << "\n";
      break;
    case InstanceFile::GroupKind::Semidirect: os << "group semidirect " << f.group_aut << "\n"; break;
    case InstanceFile::GroupKind::GPhi:
      os << "group gphi " << f.group_aut << " p " << f.gphi_p << " delta " << f.gphi_delta << "\n";
      break;
    case InstanceFile::GroupKind::Extension:
      os << "group extension " << f.extension_file << "\n";
      break;
  }
  if (f.set.has_value()) {
    const auto& s = *f.set;
    if (s.kind == "fin") {
      os << "set fin ";
      for (size_t i = 0; i < s.fin.size(); ++i) os << (i ? "," : "") << s.fin[i];
      os << "\n";
    } else if (s.kind == "coset") {
      os << "set coset gens ";
      for (size_t i = 0; i < s.gens.size(); ++i) os << (i ? "," : "") << s.gens[i];
      os << " rep " << s.rep << "\n";
    } else {
      os << "set rat " << s.file << "\n";
    }
  }
  for (const auto& [n, w] : f.elems) os << "elem " << n << ' ' << w << "\n";
  if (f.decide_decl.has_value()) {
    os << "decide " << f.decide_decl->kind << " target " << f.decide_decl->target;
    if (!f.decide_decl->aut.empty()) os << " aut " << f.decide_decl->aut;
    os << "\n";
  }
  if (f.budget.has_value())
    os << "budget len " << f.budget->max_len << " degree " << f.budget->max_degree << " steps "
       << f.budget->max_steps << "\n";
  return os.str();
}

namespace {

Automorphism resolve_aut(const InstanceFile::AutDecl& decl, const Alphabet& alpha) {
  Automorphism a;
  a.fwd.assign(static_cast<size_t>(alpha.rank()), Word());
  std::vector<bool> seen_f(static_cast<size_t>(alpha.rank()), false);
  for (const auto& [g, w] : decl.fwd) {
    if (g.size() != 1) throw input_error("bad generator name '" + g + "'");
    const int idx = alpha.gen_index(g[0]);
    if (idx < 0) throw input_error("unknown generator '" + g + "' in aut " + decl.name);
    a.fwd[static_cast<size_t>(idx)] = Word::parse(w, alpha);
    seen_f[static_cast<size_t>(idx)] = true;
  }
  for (bool b : seen_f)
    if (!b) throw input_error("aut " + decl.name + " misses a generator image");
  if (!decl.bwd.empty()) {
    a.bwd.assign(static_cast<size_t>(alpha.rank()), Word());
    std::vector<bool> seen_b(static_cast<size_t>(alpha.rank()), false);
    for (const auto& [g, w] : decl.bwd) {
      const int idx = g.size() == 1 ? alpha.gen_index(g[0]) : -1;
      if (idx < 0) throw input_error("unknown generator '" + g + "' in aut " + decl.name);
      a.bwd[static_cast<size_t>(idx)] = Word::parse(w, alpha);
      seen_b[static_cast<size_t>(idx)] = true;
    }
    for (bool b : seen_b)
      if (!b) throw input_error("aut " + decl.name + " misses an inverse image");
  }
  return a;
}

const InstanceFile::AutDecl& find_aut(const InstanceFile& f, const std::string& name) {
  for (const auto& a : f.auts)
    if (a.name == name) return a;
  throw input_error("undefined aut '" + name + "'");
}

std::optional<ViaCertificate> find_via(const InstanceFile& f, const std::string& aut,
                                       const Alphabet& alpha) {
  for (const auto& v : f.vias)
    if (v.aut == aut) return ViaCertificate{v.p, Word::parse(v.delta, alpha)};
  return std::nullopt;
}

}  // namespace

BuiltInstance build_instance(const InstanceFile& f,
                             const std::function<std::string(const std::string&)>& load_file) {
  BuiltInstance out;
  std::string structural_aut_name;  // the aut that defines the group, if any
  switch (f.gkind) {
    case InstanceFile::GroupKind::Free: {
      if (f.rank < 1) throw input_error("free rank must be >= 1");
      out.inst.ctx = make_free_context(f.rank);
      break;
    }
    case InstanceFile::GroupKind::Fatf: {
      if (f.rank < 0 || f.dim < 1) throw input_error("fatf needs rank >= 0 and dim >= 1");
      out.inst.ctx = make_fatf_context(f.rank, f.dim);
      break;
    }
    case InstanceFile::GroupKind::Semidirect: {
      const auto& decl = find_aut(f, f.group_aut);
      const Alphabet fiber(static_cast<int>(decl.fwd.size()));
      const Automorphism phi = resolve_aut(decl, fiber);
      if (!verify_automorphism(phi))
        throw input_error("aut " + f.group_aut + " fails automorphism verification");
      out.inst.ctx = make_semidirect_context(phi);
      structural_aut_name = f.group_aut;
      break;
    }
    case InstanceFile::GroupKind::GPhi: {
      const auto& decl = find_aut(f, f.group_aut);
      const Alphabet fiber(static_cast<int>(decl.fwd.size()));
      const Automorphism phi = resolve_aut(decl, fiber);
      if (!verify_automorphism(phi))
        throw input_error("aut " + f.group_aut + " fails automorphism verification");
      GPhi e{phi, f.gphi_p, Word::parse(f.gphi_delta, fiber)};
      if (!verify_via_certificate(phi, ViaCertificate{e.p, e.delta}))
        throw input_error("gphi data does not satisfy phi^p = conjugation by delta");
      out.inst.ctx = make_gphi_context(std::move(e));
      structural_aut_name = f.group_aut;
      break;
    }
    case InstanceFile::GroupKind::Extension: {
      ExtensionDatum d = extension_datum_from_text(load_file(f.extension_file));
      if (auto violation = validate_extension_datum(d))
        throw input_error("invalid extension datum: " + *violation);
      out.inst.ctx = make_extension_context(std::move(d));
      break;
    }
  }
  const Alphabet& alpha = out.inst.ctx->alphabet();

  if (!f.decide_decl.has_value()) throw input_error("instance file has no decide statement");
  const auto& d = *f.decide_decl;
  if (d.kind == "conj")
    out.inst.kind = Kind::Conj;
  else if (d.kind == "twisted")
    out.inst.kind = Kind::Twisted;
  else if (d.kind == "brinkmann")
    out.inst.kind = Kind::BrinkOrbit;
  else
    out.inst.kind = Kind::BrinkConj;

  if (!d.aut.empty()) {
    const auto& decl = find_aut(f, d.aut);
    out.inst.aut = resolve_aut(decl, alpha);
    if (!out.inst.ctx->verify_automorphism_in_context(*out.inst.aut))
      throw input_error("aut " + d.aut + " fails verification in the group");
    out.inst.via = find_via(f, d.aut, alpha);
  } else if (f.gkind == InstanceFile::GroupKind::Semidirect ||
             f.gkind == InstanceFile::GroupKind::GPhi) {
    // Conjugacy in a cyclic extension: a via declaration for the defining
    // automorphism feeds the exact reductions on the fiber.
    const auto& decl = find_aut(f, structural_aut_name);
    const Alphabet fiber(static_cast<int>(decl.fwd.size()));
    out.inst.via = find_via(f, structural_aut_name, fiber);
  }

  if (!f.set.has_value()) throw input_error("instance file has no set statement");
  const auto& s = *f.set;
  if (s.kind == "fin") {
    std::vector<Word> ws;
    for (const std::string& w : s.fin) ws.push_back(Word::parse(w, alpha));
    out.inst.set = SetSpec::finite(std::move(ws));
  } else if (s.kind == "coset") {
    std::vector<Word> gens;
    for (const std::string& w : s.gens) gens.push_back(Word::parse(w, alpha));
    out.inst.set = SetSpec::coset_of(std::move(gens), Word::parse(s.rep, alpha));
  } else {
    out.inst.set = SetSpec::rational(nfa_from_text(load_file(s.file), alpha));
  }

  bool found_target = false;
  for (const auto& [name, w] : f.elems) {
    if (name == d.target) {
      out.inst.target = Word::parse(w, alpha);
      found_target = true;
    }
  }
  if (!found_target) throw input_error("undefined elem '" + d.target + "'");

  out.budget = f.budget.value_or(Budget{});
  return out;
}

std::string verdict_to_json(const Verdict& v, const DecisionInstance& inst) {
  nlohmann::json j;
  j["answer"] = answer_name(v.answer);
  j["effort"] = {{"members_tested", v.effort.members_tested},
                 {"homs_tested", v.effort.homs_tested},
                 {"note", v.effort.note}};
  const Alphabet& a = inst.ctx->alphabet();
  if (v.witness.has_value()) {
    j["witness"] = {{"member", v.witness->member.str(a)},
                    {"conjugator", v.witness->conjugator.str(a)},
                    {"exponent", v.witness->exponent}};
  }
  if (v.certificate.has_value()) j["certificate"] = nlohmann::json::parse(v.certificate->to_json());
  if (v.lattice_no.has_value()) {
    j["lattice_certificate"] = {{"rows", v.lattice_no->rows},
                                {"target", v.lattice_no->target},
                                {"vector", v.lattice_no->sep.w},
                                {"modulus", v.lattice_no->sep.modulus}};
  }
  if (v.orbit_no.has_value()) j["orbit_certificate"] = {{"moduli", v.orbit_no->moduli}};
  return j.dump(2);
}

}  // namespace conjsep
