// Command-line front end for the counter system toolkit.
//
// Exit codes, uniform across subcommands:
//   0  positive verdict (valid / reachable / satisfiable / holds on all runs)
//   1  negative verdict (not flat, infinite monoid, unreachable, unsatisfiable,
//      violated on some run)
//   2  input or precondition error (unparsable file, unknown state, dimension
//      mismatch, commands that need flatness on a non-flat system)
//   3  inconclusive (monoid check hit its power cap, breadth-first oracle
//      exhausted its budgets, model-checking threshold exceeds --budget)
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "facs/generators.hpp"
#include "facs/json_io.hpp"
#include "facs/logic.hpp"
#include "facs/model_check.hpp"
#include "facs/oracle.hpp"
#include "facs/qbf.hpp"
#include "facs/solver.hpp"
#include "facs/system.hpp"

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kBadInput = 2;
constexpr int kInconclusive = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A system file is either a bare system object or, as written by gen-qbf,
// a problem object {"system":..., "init":..., "target":...} whose embedded
// initial configuration and target serve as defaults for the flags.
struct Problem {
  facs::CounterSystem system;
  std::optional<facs::Configuration> init;
  std::optional<std::string> target;
};

Problem load_problem(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  Problem p;
  if (j.contains("system")) {
    p.system = facs::system_from_json(j.at("system"));
    if (j.contains("init")) p.init = facs::config_from_json(p.system, j.at("init"));
    if (j.contains("target")) p.target = j.at("target").get<std::string>();
  } else {
    p.system = facs::system_from_json(j);
  }
  return p;
}

facs::CounterSystem load_system(const std::string& path) { return load_problem(path).system; }

facs::Configuration pick_init(const Problem& p, const std::string& flag,
                              const facs::CounterSystem& s) {
  if (!flag.empty()) return facs::parse_configuration(s, flag);
  if (p.init) return *p.init;
  throw std::invalid_argument("no --init given and the file embeds none");
}

std::string pick_target(const Problem& p, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (p.target) return *p.target;
  throw std::invalid_argument("no --target given and the file embeds none");
}

// Formula options take the formula inline or, with a leading @, from a file.
std::string formula_text(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return slurp(arg.substr(1));
  return arg;
}

std::string join_rule_ids(const facs::CounterSystem& s, const std::vector<std::size_t>& rules) {
  std::string out;
  for (std::size_t i : rules) {
    if (!out.empty()) out += " ";
    out += s.rules[i].id;
  }
  return out;
}

nlohmann::json word_to_json(const facs::LassoWord& w) {
  auto letters = [](const std::vector<facs::Letter>& ls) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : ls) arr.push_back(l);
    return arr;
  };
  return {{"prefix", letters(w.prefix)}, {"loop", letters(w.loop)}};
}

nlohmann::json run_witness_json(const facs::CounterSystem& s, const facs::RunWitness& w) {
  nlohmann::json j = facs::witness_to_json(s, w.schema, w.counts, w.reached);
  j["certificate"] = facs::int_to_json(w.certificate);
  return j;
}

int cmd_validate(const std::string& path, std::uint64_t cap) {
  facs::CounterSystem s = load_system(path);
  facs::validate_wellformed(s);
  std::cout << "states: " << s.states.size() << "\n"
            << "rules: " << s.rules.size() << "\n"
            << "dimension: " << s.dimension << "\n";
  facs::FlatnessResult flat = facs::check_flat(s);
  if (!flat.flat) {
    std::cout << "flat: no (state " << flat.shared_state << " lies on two simple cycles)\n";
    return kNo;
  }
  std::cout << "flat: yes\n";
  facs::FiniteMonoidResult fm = facs::check_finite_monoid(s, cap);
  if (fm.kind == facs::MonoidKind::capped) {
    std::cout << "monoid: undecided at power cap " << cap << " (cycle "
              << join_rule_ids(s, fm.cycles[fm.offending].rules) << ")\n";
    return kInconclusive;
  }
  if (fm.kind == facs::MonoidKind::infinite) {
    std::cout << "monoid: infinite (cycle "
              << join_rule_ids(s, fm.cycles[fm.offending].rules) << ")\n";
    return kNo;
  }
  std::cout << "monoid: finite\n";
  return kYes;
}

int cmd_monoid(const std::string& path, std::uint64_t cap) {
  facs::CounterSystem s = load_system(path);
  facs::validate_wellformed(s);
  facs::FlatnessResult flat = facs::check_flat(s);
  if (!flat.flat)
    throw std::invalid_argument("monoid: system is not flat (state " + flat.shared_state +
                                " lies on two simple cycles)");
  facs::FiniteMonoidResult fm = facs::check_finite_monoid(s, cap);
  for (const facs::CycleMonoid& cm : fm.cycles) {
    std::cout << "cycle [" << join_rule_ids(s, cm.rules) << "]: ";
    switch (cm.monoid.kind) {
      case facs::MonoidKind::finite:
        std::cout << "finite, alpha " << cm.monoid.info.alpha << ", beta " << cm.monoid.info.beta
                  << ", " << cm.monoid.info.powers.size() << " distinct powers\n";
        break;
      case facs::MonoidKind::infinite:
        std::cout << "infinite\n";
        break;
      case facs::MonoidKind::capped:
        std::cout << "undecided at power cap " << cap << "\n";
        break;
    }
  }
  if (fm.kind == facs::MonoidKind::capped) return kInconclusive;
  return fm.kind == facs::MonoidKind::finite ? kYes : kNo;
}

int cmd_reach(const std::string& path, const std::string& init_text,
              const std::string& target_flag, bool emit) {
  Problem p = load_problem(path);
  const std::string target = pick_target(p, target_flag);
  if (!p.system.has_state(target))
    throw std::invalid_argument("reach: unknown target state " + target);
  // Run schemas end in a cycle, so a target without outgoing rules is only
  // visible after deadlock completion. The added escapes are unguarded and
  // leave the counters alone, hence reachability over finite paths is the same.
  facs::CounterSystem s = facs::complete_deadlock_free(p.system);
  std::cerr << "note: completed the system with sink state " << s.states.back().id << "\n";
  facs::Configuration init = pick_init(p, init_text, s);
  facs::ReachResult r = facs::reach(s, init, target);
  std::cout << "reachable: " << (r.reachable ? "yes" : "no") << "\n";
  if (r.reachable && emit && r.witness)
    std::cout << run_witness_json(s, *r.witness).dump(2) << "\n";
  return r.reachable ? kYes : kNo;
}

int cmd_mc(const std::string& path, const std::string& init_text, const std::string& pltl,
           const std::string& fo, bool all, bool complete, bool emit, std::uint64_t budget) {
  if (pltl.empty() == fo.empty())
    throw std::invalid_argument("mc: give exactly one of --pltl or --fo");
  Problem p = load_problem(path);
  facs::CounterSystem s = std::move(p.system);
  if (complete) {
    s = facs::complete_deadlock_free(s);
    std::cerr << "note: completed the system with sink state " << s.states.back().id << "\n";
  }
  facs::Configuration init = pick_init(p, init_text, s);
  facs::McOptions opt;
  opt.threshold_budget = budget;

  // --all asks whether the formula holds on every run, i.e. whether its
  // negation is unsatisfiable.
  facs::McResult res;
  if (!pltl.empty()) {
    facs::PltlFormula f = facs::parse_pltl(formula_text(pltl));
    if (all) f = facs::pltl_negate(f);
    res = facs::mc_pltl(s, init, f, opt);
  } else {
    facs::FoFormula f = facs::parse_fo(formula_text(fo));
    if (all) f = facs::fo_negate(f);
    res = facs::mc_fo(s, init, f, opt);
  }
  std::cerr << "note: tried " << res.schemas_tried << " schemas, " << res.leaves << " patterns, "
            << res.evals << " word evaluations, " << res.ilp_calls << " constraint solves\n";

  auto emit_witness = [&]() {
    if (!emit || !res.witness) return;
    nlohmann::json j = run_witness_json(s, *res.witness);
    if (res.word) j["word"] = word_to_json(*res.word);
    std::cout << j.dump(2) << "\n";
  };
  if (!all) {
    std::cout << "satisfiable: " << (res.sat ? "yes" : "no") << "\n";
    if (res.sat) emit_witness();
    return res.sat ? kYes : kNo;
  }
  if (res.sat) {
    std::cout << "holds on all runs: no\n";
    emit_witness();
    return kNo;
  }
  std::cout << "holds on all runs: yes\n";
  return kYes;
}

int cmd_gen_qbf(const std::string& path) {
  facs::Sigma2Qbf f = facs::parse_qdimacs(slurp(path));
  facs::QbfReduction red = facs::build_reduction(f);
  nlohmann::json j;
  j["system"] = facs::system_to_json(red.system);
  j["init"] = facs::config_to_json(red.init);
  j["target"] = red.target;
  std::cout << j.dump(2) << "\n";
  return kYes;
}

int cmd_oracle(const std::string& path, const std::string& init_text,
               const std::string& target_flag) {
  Problem p = load_problem(path);
  const std::string target = pick_target(p, target_flag);
  facs::CounterSystem s = std::move(p.system);
  facs::Configuration init = pick_init(p, init_text, s);
  std::uint64_t steps = 1000;
  facs::Int value(1000000);
  if (const char* e = std::getenv("FACS_BUDGET_STEPS")) steps = std::strtoull(e, nullptr, 10);
  if (const char* e = std::getenv("FACS_BUDGET_VALUE")) value = facs::int_from_string(e);
  facs::BfsResult r = facs::bfs_reach(s, init, target, steps, value);
  std::cerr << "note: explored " << r.explored << " configurations\n";
  if (r.reachable()) {
    std::cout << "reachable: yes\n";
    if (r.hit) std::cout << facs::config_to_json(*r.hit).dump() << "\n";
    return kYes;
  }
  std::cout << "exhausted: no conclusion within steps=" << steps << " value=" << value << "\n";
  return kInconclusive;
}

int cmd_bench(std::uint64_t seed, unsigned jobs, unsigned trials) {
  if (jobs == 0) jobs = 1;
  std::cout << "seed: " << seed << "\n"
            << "jobs: " << jobs << "\n"
            << "trials: " << trials << "\n";
  struct Row {
    std::size_t states = 0, rules = 0;
    double solver_ms = 0, oracle_ms = 0;
    bool solver_hit = false, oracle_hit = false, agree = true;
  };
  std::vector<Row> rows(trials);
  // Each trial draws from its own pre-seeded generator and writes to its own
  // slot, so the report is identical for every --jobs value.
  auto work = [&](unsigned first) {
    for (unsigned i = first; i < trials; i += jobs) {
      facs::Rng rng(seed + 1000003ull * i);
      facs::SystemGenOptions gen;
      facs::CounterSystem s = facs::complete_deadlock_free(facs::random_flat_system(rng, gen));
      facs::Configuration init{s.states.front().id, facs::Vec(s.dimension, facs::Int(0))};
      const std::string target = s.states[s.states.size() - 2].id;  // last original state
      Row& row = rows[i];
      row.states = s.states.size();
      row.rules = s.rules.size();
      auto t0 = std::chrono::steady_clock::now();
      facs::BfsResult bfs = facs::bfs_reach(s, init, target, 12, facs::Int(60));
      auto t1 = std::chrono::steady_clock::now();
      facs::ReachResult slv = facs::reach(s, init, target);
      auto t2 = std::chrono::steady_clock::now();
      row.oracle_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.solver_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
      row.oracle_hit = bfs.reachable();
      row.solver_hit = slv.reachable;
      // The oracle is one-sided: a hit within budget must be confirmed.
      row.agree = !row.oracle_hit || row.solver_hit;
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (std::thread& t : pool) t.join();
  }
  double solver_total = 0, oracle_total = 0;
  unsigned disagreements = 0;
  std::cout << "trial states rules solver_ms oracle_ms solver oracle\n";
  for (unsigned i = 0; i < trials; ++i) {
    const Row& r = rows[i];
    solver_total += r.solver_ms;
    oracle_total += r.oracle_ms;
    if (!r.agree) ++disagreements;
    std::cout << i << " " << r.states << " " << r.rules << " " << r.solver_ms << " " << r.oracle_ms
              << " " << (r.solver_hit ? "hit" : "miss") << " " << (r.oracle_hit ? "hit" : "miss")
              << (r.agree ? "" : " DISAGREE") << "\n";
  }
  std::cout << "total solver_ms " << solver_total << " oracle_ms " << oracle_total
            << " disagreements " << disagreements << "\n";
  return disagreements == 0 ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flat affine counter systems: reachability and linear-time model checking"};
  app.require_subcommand(1);

  std::string v_path;
  std::uint64_t v_cap = 1000000;
  CLI::App* validate = app.add_subcommand(
      "validate", "check well-formedness, flatness and the finite monoid property");
  validate->add_option("system", v_path, "system JSON file")->required();
  validate->add_option("--cap", v_cap, "power cap for the monoid iteration");

  std::string mo_path;
  std::uint64_t mo_cap = 1000000;
  CLI::App* monoid =
      app.add_subcommand("monoid", "report alpha/beta/sizes of every cycle's update monoid");
  monoid->add_option("system", mo_path, "system JSON file")->required();
  monoid->add_option("--cap", mo_cap, "power cap for the monoid iteration");

  std::string r_path, r_init, r_target;
  bool r_emit = false;
  CLI::App* reach = app.add_subcommand(
      "reach", "decide state reachability (the system is deadlock-completed first)");
  reach->add_option("system", r_path, "system JSON file")->required();
  reach->add_option("--init", r_init, "initial configuration, e.g. \"q0 0 0 0\"");
  reach->add_option("--target", r_target, "target state id");
  reach->add_flag("--emit-witness", r_emit, "print the run witness as JSON on stdout");

  std::string m_path, m_init, m_pltl, m_fo;
  bool m_all = false, m_complete = false, m_emit = false;
  std::uint64_t m_budget = 4096;
  CLI::App* mc = app.add_subcommand("mc", "model check a temporal or first order formula");
  mc->add_option("system", m_path, "system JSON file")->required();
  mc->add_option("--init", m_init, "initial configuration, e.g. \"q0 0 0 0\"");
  mc->add_option("--pltl", m_pltl, "temporal formula, inline or @file");
  mc->add_option("--fo", m_fo, "first order formula, inline or @file");
  mc->add_flag("--all", m_all, "check that the formula holds on every run");
  mc->add_flag("--complete", m_complete, "deadlock-complete the system first");
  mc->add_flag("--emit-witness", m_emit, "print the witness run and word as JSON on stdout");
  mc->add_option("--budget", m_budget, "largest admissible truncation threshold");

  std::string g_path;
  CLI::App* gen = app.add_subcommand(
      "gen-qbf", "translate a QDIMACS exists-forall instance into a reachability problem");
  gen->add_option("qdimacs", g_path, "QDIMACS file with one e line and one a line")->required();

  std::string o_path, o_init, o_target;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "budgeted breadth-first reachability search (FACS_BUDGET_STEPS/FACS_BUDGET_VALUE)");
  oracle->add_option("system", o_path, "system JSON file")->required();
  oracle->add_option("--init", o_init, "initial configuration, e.g. \"q0 0 0 0\"");
  oracle->add_option("--target", o_target, "target state id");

  std::uint64_t b_seed = 42;
  unsigned b_jobs = 1, b_trials = 20;
  CLI::App* bench =
      app.add_subcommand("bench", "time the solver against the breadth-first oracle");
  bench->add_option("--seed", b_seed, "generator seed, logged in the report");
  bench->add_option("--jobs", b_jobs, "worker threads; the report is the same for any value");
  bench->add_option("--trials", b_trials, "number of random systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (*validate) return cmd_validate(v_path, v_cap);
    if (*monoid) return cmd_monoid(mo_path, mo_cap);
    if (*reach) return cmd_reach(r_path, r_init, r_target, r_emit);
    if (*mc) return cmd_mc(m_path, m_init, m_pltl, m_fo, m_all, m_complete, m_emit, m_budget);
    if (*gen) return cmd_gen_qbf(g_path);
    if (*oracle) return cmd_oracle(o_path, o_init, o_target);
    if (*bench) return cmd_bench(b_seed, b_jobs, b_trials);
  } catch (const facs::McBudgetError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
