// conjsep_cli.cpp -- batch front end: parse the instance DSL, dispatch to
// the deciders, emit certificates, and run the self-test suite.
//
// Exit codes for `decide`: 0 = YES, 1 = NO, 2 = UNDECIDED, >= 3 = error.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conjsep/instance_io.hpp"
#include "criteria.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw conjsep::input_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separability-driven conjugacy deciders"};
  app.require_subcommand(1);

  std::string decide_file, out_path;
  int budget_len = -1, budget_degree = -1;
  long long budget_steps = -1;
  bool no_fast_path = false, parallel = false;
  uint64_t seed = 20250809;
  auto* cmd_decide = app.add_subcommand("decide", "decide one instance file");
  cmd_decide->add_option("file", decide_file, "instance file")->required();
  cmd_decide->add_option("--out", out_path, "write the verdict record (JSON) here");
  cmd_decide->add_option("--budget-len", budget_len, "max enumeration length");
  cmd_decide->add_option("--budget-degree", budget_degree, "max quotient degree");
  cmd_decide->add_option("--budget-steps", budget_steps, "max engine steps");
  cmd_decide->add_flag("--no-fast-path", no_fast_path, "force the generic engine");
  cmd_decide->add_flag("--parallel", parallel, "two-worker mode (verdicts unchanged)");
  cmd_decide->add_option("--seed", seed, "seed for randomized components");

  double scale = 1.0;
  auto* cmd_selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  cmd_selftest->add_option("--scale", scale, "sample-count scale factor");
  cmd_selftest->add_option("--seed", seed, "seed for randomized samples");

  std::string print_file;
  auto* cmd_print = app.add_subcommand("print", "parse and reprint an instance file");
  cmd_print->add_option("file", print_file, "instance file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_print->parsed()) {
      std::cout << conjsep::print_instance(conjsep::parse_instance(read_file(print_file)));
      return 0;
    }
    if (cmd_selftest->parsed()) {
      conjsep::acceptance::Options opt;
      opt.scale = scale;
      opt.seed = seed;
      std::cout << "seed " << seed << "\n";
      const int failures = conjsep::acceptance::run_all(opt, std::cout);
      return failures == 0 ? 0 : 3;
    }
    // decide
    const auto file = conjsep::parse_instance(read_file(decide_file));
    const auto base = std::filesystem::path(decide_file).parent_path();
    auto built = conjsep::build_instance(file, [&](const std::string& rel) {
      const auto p = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel)
                                                              : base / rel;
      return read_file(p.string());
    });
    if (budget_len > 0) built.budget.max_len = budget_len;
    if (budget_degree > 0) built.budget.max_degree = budget_degree;
    if (budget_steps > 0) built.budget.max_steps = budget_steps;
    conjsep::DecideOptions opts;
    opts.no_fast_path = no_fast_path;
    opts.parallel = parallel;
    const auto t0 = std::chrono::steady_clock::now();
    const conjsep::Verdict v = conjsep::decide(built.inst, built.budget, opts);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    if (!conjsep::verify(v, built.inst)) {
      std::cerr << "internal error: verdict failed verification\n";
      return 4;
    }
    const std::string record = conjsep::verdict_to_json(v, built.inst);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << record << "\n";
    }
    std::cout << "verdict " << conjsep::answer_name(v.answer) << " in " << ms << " ms (seed "
              << seed << ", members " << v.effort.members_tested << ", quotients "
              << v.effort.homs_tested << ")\n";
    if (out_path.empty()) std::cout << record << "\n";
    switch (v.answer) {
      case conjsep::Answer::Yes: return 0;
      case conjsep::Answer::No: return 1;
      case conjsep::Answer::Undecided: return 2;
    }
    return 4;
  } catch (const conjsep::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
