#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "plwhile/check.hpp"
#include "plwhile/game.hpp"
#include "plwhile/parser.hpp"
#include "plwhile/printer.hpp"
#include "plwhile/script.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;   // proof or advantage failure
constexpr int kExitUsage = 2;    // usage, parse, lint errors

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

plw::Program load(const std::string& path) {
  return plw::parse_program(read_file(path));
}

std::vector<plw::Value> parse_args_list(const plw::Program& prog,
                                        const std::vector<std::string>& args) {
  std::vector<plw::Value> out;
  for (const auto& a : args) {
    auto elem = prog.find_elem(a);
    if (!elem) throw std::runtime_error("unknown element: " + a);
    out.push_back(*elem);
  }
  return out;
}

int cmd_run(const std::string& file, const std::string& proc_path,
            const std::vector<std::string>& args, int fuel) {
  plw::Program prog = load(file);
  auto dot = proc_path.find('.');
  if (dot == std::string::npos)
    throw std::runtime_error("--proc expects MODULE.PROC");
  const plw::Module* mod = prog.find_module(proc_path.substr(0, dot));
  if (!mod)
    throw std::runtime_error("unknown module: " + proc_path.substr(0, dot));
  std::string proc = proc_path.substr(dot + 1);

  auto uni = plw::globals_universe(prog, *mod);
  plw::Memory m(*uni, true);
  auto result = plw::run_proc(prog, *mod, proc, parse_args_list(prog, args),
                              m, fuel);
  std::cout << plw::print_result_dist(prog, result) << "\n";
  return kExitOk;
}

int cmd_check(const std::string& file, const std::string& goal, int fuel) {
  plw::Program prog = load(file);
  plw::ScriptResult r = plw::check_script(prog, goal, fuel);
  switch (r.status) {
    case plw::ScriptResult::Status::Proven:
      std::cout << "proven: " << goal << "\n";
      return kExitOk;
    case plw::ScriptResult::Status::Stuck:
      std::cout << "stuck: " << r.message << "\n";
      return kExitFailed;
    case plw::ScriptResult::Status::Refuted:
      std::cout << "counterexample: " << r.message << "\n";
      return kExitFailed;
  }
  return kExitFailed;
}

int cmd_advantage(const std::string& file, const std::string& left,
                  const std::string& right, int depth, int fuel) {
  plw::Program prog = load(file);
  const plw::Module* m1 = prog.find_module(left);
  const plw::Module* m2 = prog.find_module(right);
  if (!m1) throw std::runtime_error("unknown module: " + left);
  if (!m2) throw std::runtime_error("unknown module: " + right);
  plw::StrategyPtr witness;
  plw::Rational adv =
      plw::optimal_advantage(prog, *m1, *m2, depth, fuel, &witness);
  std::cout << adv.to_fraction_string() << "\n";
  if (!adv.is_zero() && witness) {
    std::cout << "witness strategy:\n"
              << plw::print_strategy(prog, witness, 1);
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_lint(const std::string& file) {
  plw::Program prog = load(file);
  auto errors = plw::well_formed(prog);
  for (const auto& mod : prog.modules) {
    auto guard = plw::guard_check(prog, mod);
    errors.insert(errors.end(), guard.begin(), guard.end());
  }
  if (errors.empty()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  for (const auto& e : errors)
    std::cout << e.pos.line << ":" << e.pos.col << ": " << e.message << "\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plWhile proof checker and exact game-equivalence engine"};
  app.require_subcommand(1);

  std::string file, proc, goal, left, right;
  std::vector<std::string> args;
  int fuel = 64;
  int depth = 4;

  auto* run = app.add_subcommand("run", "execute a procedure exactly");
  run->add_option("file", file)->required();
  run->add_option("--proc", proc, "MODULE.PROC")->required();
  run->add_option("--args", args)->delimiter(',');
  run->add_option("--fuel", fuel);

  auto* check = app.add_subcommand("check", "run a proof script");
  check->add_option("file", file)->required();
  check->add_option("--goal", goal)->required();
  check->add_option("--fuel", fuel);

  auto* adv = app.add_subcommand("advantage",
                                 "exact optimal distinguishing advantage");
  adv->add_option("file", file)->required();
  adv->add_option("--left", left)->required();
  adv->add_option("--right", right)->required();
  adv->add_option("--depth", depth);
  adv->add_option("--fuel", fuel);

  auto* lint = app.add_subcommand("lint", "well-formedness and label guard");
  lint->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(file, proc, args, fuel);
    if (check->parsed()) return cmd_check(file, goal, fuel);
    if (adv->parsed()) return cmd_advantage(file, left, right, depth, fuel);
    if (lint->parsed()) return cmd_lint(file);
  } catch (const plw::ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
