// instance_io.hpp -- the line-oriented instance DSL, certificate and
// verdict serialization.
//
// Grammar (one statement per line, '#' starts a comment):
//   aut <name> <gen>-><word> ... inverse <gen>-><word> ...
//   via <autname> p <p> delta <word>
//   group free rank <n>
//   group fatf rank <n> dim <m>
//   group semidirect <autname>
//   group gphi <autname> p <p> delta <word>
//   group extension <file>
//   set fin <word>,...
//   set coset gens <word>,... rep <word>
//   set rat <nfa-file>
//   elem <name> <word>
//   decide <conj|twisted|brinkmann|brinkconj> target <name> [aut <name>]
//   budget len <L> degree <D> steps <S>
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conjsep/engine.hpp"

namespace conjsep {

struct InstanceFile {
  struct AutDecl {
    std::string name;
    std::vector<std::pair<std::string, std::string>> fwd;  // generator name -> word text
    std::vector<std::pair<std::string, std::string>> bwd;
  };
  struct ViaDecl {
    std::string aut;
    long long p = 1;
    std::string delta;
  };
  struct SetDecl {
    std::string kind;  // fin | coset | rat
    std::vector<std::string> fin;
    std::vector<std::string> gens;
    std::string rep;
    std::string file;
  };
  struct DecideDecl {
    std::string kind;
    std::string target;
    std::string aut;
  };

  enum class GroupKind { Free, Fatf, Semidirect, GPhi, Extension };
  GroupKind gkind = GroupKind::Free;
  int rank = 1;
  int dim = 0;
  std::string group_aut;
  long long gphi_p = 1;
  std::string gphi_delta = "1";
  std::string extension_file;

  std::vector<AutDecl> auts;
  std::vector<ViaDecl> vias;
  std::optional<SetDecl> set;
  std::vector<std::pair<std::string, std::string>> elems;
  std::optional<DecideDecl> decide_decl;
  std::optional<Budget> budget;
};

// Throws input_error with line/column positions on bad input.
InstanceFile parse_instance(const std::string& text);
std::string print_instance(const InstanceFile& f);

// Resolves names, parses words over the proper alphabets and assembles the
// engine instance. `load_file` reads referenced nfa/extension files.
struct BuiltInstance {
  DecisionInstance inst;
  Budget budget;
};
BuiltInstance build_instance(const InstanceFile& f,
                             const std::function<std::string(const std::string&)>& load_file);

std::string verdict_to_json(const Verdict& v, const DecisionInstance& inst);

}  // namespace conjsep
