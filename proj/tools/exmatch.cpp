// Command-line front end: solve/bcpm/cpm/mocp read an instance file and print
// a report, gen writes seeded instances, verify rechecks a report against its
// instance. Exit codes: 0 decided yes, 1 decided no, 2 bad input, 3 budget.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "exmatch/bcpm.hpp"
#include "exmatch/cpm.hpp"
#include "exmatch/io.hpp"
#include "exmatch/mocp.hpp"
#include "exmatch/oracles.hpp"
#include "exmatch/solver.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw exmatch::InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw exmatch::InputError("cannot open " + path);
  out << text;
}

exmatch::EmInstance& em_of(exmatch::Instance& ins) {
  if (!ins.em) throw exmatch::InputError("expected an em instance");
  return *ins.em;
}

void write_trace(const std::string& path, const std::vector<exmatch::TraceEvent>& tr) {
  std::ostringstream os;
  for (const exmatch::TraceEvent& ev : tr)
    os << ev.phase << ' ' << ev.step << ' ' << ev.r_m << ' ' << ev.r_mp << ' '
       << ev.symdiff << '\n';
  write_file(path, os.str());
}

int report_matching(const exmatch::ColoredGraph& g,
                    const std::optional<exmatch::PerfectMatching>& m) {
  if (!m) {
    std::cout << exmatch::render_no_report();
    return kExitNo;
  }
  std::cout << exmatch::render_matching_report(g, *m);
  return kExitYes;
}

int cmd_solve(const std::string& path, const std::string& mode, bool beta,
              long long budget, std::uint64_t seed, const std::string& trace_path) {
  exmatch::Instance ins = exmatch::parse_instance(read_file(path));
  exmatch::EmInstance& em = em_of(ins);

  exmatch::SolverConfig cfg;
  cfg.mode = beta ? exmatch::SkipMode::beta : exmatch::SkipMode::alpha;
  cfg.seed = seed;
  if (budget > 0) {
    cfg.color_coding_budget = budget;
    cfg.zero_set_budget = std::min(budget, cfg.zero_set_budget);
    cfg.exchange_budget = std::min(budget, cfg.exchange_budget);
  }

  exmatch::SolverOutcome out;
  if (mode == "approx") {
    out = exmatch::solve_em_approx(em.graph, em.k, cfg);
  } else {
    exmatch::BcpmOracle oracle = [](const exmatch::ColoredGraph& g, int k) {
      return g.bipartite() ? exmatch::solve_bcpm_bipartite(g, k)
                           : exmatch::solve_bcpm_bruteforce(g, k);
    };
    out = exmatch::solve_em(em.graph, em.k, cfg, oracle);
  }
  if (!trace_path.empty()) write_trace(trace_path, out.trace);

  using Kind = exmatch::SolverOutcome::Kind;
  if (out.kind == Kind::budget_exceeded) {
    std::cout << exmatch::render_budget_report();
    return kExitBudget;
  }
  if (out.kind == Kind::no_instance) {
    std::cout << exmatch::render_no_report();
    return kExitNo;
  }
  return report_matching(em.graph, out.matching);
}

int cmd_bcpm(const std::string& path) {
  exmatch::Instance ins = exmatch::parse_instance(read_file(path));
  exmatch::EmInstance& em = em_of(ins);
  std::optional<exmatch::PerfectMatching> m =
      em.graph.bipartite() ? exmatch::solve_bcpm_bipartite(em.graph, em.k)
                           : exmatch::solve_bcpm_bruteforce(em.graph, em.k);
  return report_matching(em.graph, m);
}

int cmd_cpm(const std::string& path) {
  exmatch::Instance ins = exmatch::parse_instance(read_file(path));
  exmatch::EmInstance& em = em_of(ins);
  std::optional<exmatch::CpmResult> r = exmatch::solve_cpm(em.graph, em.k);
  if (!r) {
    std::cout << exmatch::render_no_report();
    return kExitNo;
  }
  std::cout << exmatch::render_matching_report(em.graph, r->matching);
  return kExitYes;
}

int cmd_mocp(const std::string& path) {
  exmatch::Instance ins = exmatch::parse_instance(read_file(path));
  if (!ins.mocp) throw exmatch::InputError("expected a mocp instance");
  const exmatch::WeightedDigraph& d = ins.mocp->digraph;
  std::optional<exmatch::MocpResult> r = exmatch::solve_mocp(d, d.weights());
  if (!r) {
    std::cout << exmatch::render_no_report();
    return kExitNo;
  }
  std::cout << exmatch::render_cycle_report(d, *r);
  return kExitYes;
}

int cmd_verify(const std::string& inst_path, const std::string& match_path,
               const std::string& problem) {
  exmatch::Instance ins = exmatch::parse_instance(read_file(inst_path));
  exmatch::EmInstance& em = em_of(ins);
  exmatch::PerfectMatching m = exmatch::parse_matching(em.graph, read_file(match_path));
  int r = m.red_count();
  bool ok;
  if (problem == "em")
    ok = r == em.k;
  else if (problem == "bcpm")
    ok = r <= em.k && (em.k - r) % 2 == 0;
  else
    ok = (em.k - r) % 2 == 0;
  if (!ok) {
    std::cout << exmatch::render_no_report();
    return kExitNo;
  }
  std::cout << "s yes r=" << r << '\n';
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"red/blue perfect matching toolkit"};
  app.require_subcommand(1);

  std::string in_path, match_path, trace_path, out_path;
  std::string mode = "oracle";
  std::string problem = "em";
  bool beta = false, alpha = false;
  long long budget = 0;
  std::uint64_t seed = 1;

  CLI::App* solve = app.add_subcommand("solve", "exact red-count perfect matching");
  solve->add_option("instance", in_path)->required();
  solve->add_option("--mode", mode)->check(CLI::IsMember({"oracle", "approx"}));
  solve->add_flag("--alpha", alpha, "independence-bound skip search (default)");
  solve->add_flag("--beta", beta, "bipartite-bound skip search");
  solve->add_option("--budget", budget, "work cap for the randomized stage");
  solve->add_option("--seed", seed);
  solve->add_option("--trace", trace_path, "write one line per solver step");

  CLI::App* bcpm = app.add_subcommand("bcpm", "bounded correct-parity matching");
  bcpm->add_option("instance", in_path)->required();

  CLI::App* cpm = app.add_subcommand("cpm", "correct-parity matching");
  cpm->add_option("instance", in_path)->required();

  CLI::App* mocp = app.add_subcommand("mocp", "minimum odd directed cycle");
  mocp->add_option("instance", in_path)->required();

  CLI::App* gen = app.add_subcommand("gen", "write a seeded random instance");
  std::string model;
  std::vector<std::string> params;
  int gen_k = 0;
  gen->add_option("model", model)
      ->required()
      ->check(CLI::IsMember({"random-bipartite", "complete", "complete-bipartite",
                             "planted-em", "random-digraph"}));
  gen->add_option("params", params, "model parameters in order");
  gen->add_option("--seed", seed);
  gen->add_option("--k", gen_k, "red target for the header (planted-em sets its own)");
  gen->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "recheck a report against its instance");
  verify->add_option("instance", in_path)->required();
  verify->add_option("matching", match_path)->required();
  verify->add_option("--problem", problem)->check(CLI::IsMember({"em", "bcpm", "cpm"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (alpha && beta) throw exmatch::InputError("pick one of --alpha/--beta");
      return cmd_solve(in_path, mode, beta, budget, seed, trace_path);
    }
    if (bcpm->parsed()) return cmd_bcpm(in_path);
    if (cpm->parsed()) return cmd_cpm(in_path);
    if (mocp->parsed()) return cmd_mocp(in_path);
    if (verify->parsed()) return cmd_verify(in_path, match_path, problem);

    // gen
    auto need = [&](std::size_t c) {
      if (params.size() != c)
        throw exmatch::InputError(model + " takes " + std::to_string(c) + " parameters");
    };
    auto num = [&](std::size_t i) { return std::stod(params[i]); };
    auto cnt = [&](std::size_t i) {
      double v = num(i);
      if (v != static_cast<int>(v)) throw exmatch::InputError("expected an integer");
      return static_cast<int>(v);
    };
    std::string text;
    if (model == "random-bipartite") {
      need(4);
      text = exmatch::render_instance(
          exmatch::gen_random_bipartite(cnt(0), cnt(1), num(2), num(3), seed), gen_k);
    } else if (model == "complete") {
      need(2);
      text = exmatch::render_instance(exmatch::gen_complete(cnt(0), num(1), seed), gen_k);
    } else if (model == "complete-bipartite") {
      need(2);
      text = exmatch::render_instance(exmatch::gen_complete_bipartite(cnt(0), num(1), seed), gen_k);
    } else if (model == "planted-em") {
      need(2);
      exmatch::PlantedEm p = exmatch::gen_planted_em(cnt(0), cnt(1), seed);
      text = exmatch::render_instance(p.graph, p.k);
    } else {  // random-digraph
      need(3);
      text = exmatch::render_instance(exmatch::gen_random_digraph(cnt(0), num(1), cnt(2), seed));
    }
    if (out_path.empty())
      std::cout << text;
    else
      write_file(out_path, text);
    return kExitYes;
  } catch (const exmatch::BudgetError& e) {
    std::cerr << "budget: " << e.what() << '\n';
    std::cout << exmatch::render_budget_report();
    return kExitBudget;
  } catch (const exmatch::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
