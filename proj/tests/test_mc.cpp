#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "facs/generators.hpp"
#include "facs/logic.hpp"
#include "facs/model_check.hpp"
#include "facs/schema.hpp"
#include "facs/solver.hpp"
#include "facs/system.hpp"
#include "support/fig1.hpp"

using namespace facs;

namespace {

Configuration zero_init(const CounterSystem& s) {
  return Configuration{s.states.front().id, Vec(s.dimension, Int(0))};
}

// Ground truth for existential questions, by brute force over small counts:
// some schema, iterated with cycle counts up to cap, both runs and satisfies
// the checker. Misses witnesses that need larger counts, so it can only be
// used one-sidedly.
template <typename Checker>
bool small_count_witness(const CounterSystem& s, const Configuration& init, int cap,
                         const Checker& checker) {
  for (const PathSchema& p : collect_schemas(s, init.state)) {
    std::vector<std::size_t> cyc;
    for (std::size_t e = 0; e + 1 < p.elements.size(); ++e)
      if (p.elements[e].is_cycle) cyc.push_back(e);
    std::vector<Int> counts(p.elements.size() - 1, Int(1));
    auto sweep = [&](auto&& self, std::size_t k) -> bool {
      if (k == cyc.size()) {
        IteratedPathSchema ips{p, counts};
        if (!validate_ips(s, init, ips).valid) return false;
        return checker(word_of(s, ips));
      }
      for (int c = 1; c <= cap; ++c) {
        counts[cyc[k]] = Int(c);
        if (self(self, k + 1)) return true;
      }
      return false;
    };
    if (sweep(sweep, 0)) return true;
  }
  return false;
}

CounterSystem two_state() {
  CounterSystem s;
  s.dimension = 1;
  s.states = {State{"p0", {"a"}}, State{"p1", {"b"}}};
  Matrix id = Matrix::identity(1);
  s.rules = {TransitionRule{"go", "p0", "p1", Guard{}, AffineUpdate{id, {0}}},
             TransitionRule{"idle", "p1", "p1", Guard{}, AffineUpdate{id, {0}}}};
  return s;
}

const char* kRunningPltl = "G((b & X b & F d) -> F(c & X c))";
const char* kRunningFo =
    "forall x. forall xp. ((x < xp & b(x) & b(xp) & exists z. d(z)) -> "
    "exists y. exists yp. (c(y) & c(yp)))";

}  // namespace

TEST_CASE("temporal model checking on the running example", "[mc]") {
  CounterSystem s = fig1_system();
  Configuration init = zero_init(s);

  SECTION("an eventuality that forces the full chain") {
    PltlFormula f = parse_pltl("F d");
    McResult r = mc_pltl(s, init, f);
    REQUIRE(r.sat);
    REQUIRE(r.witness.has_value());
    REQUIRE(r.word.has_value());
    CHECK(r.schemas_tried == 4);  // three shorter schemas have no d
    CHECK(r.witness->counts == std::vector<Int>(6, Int(1)));
    CHECK(r.witness->reached.state == "q3");
    CHECK(r.witness->reached.values == Vec{2, 0, 1});
    CHECK(validate_ips(s, init, IteratedPathSchema{r.witness->schema, r.witness->counts}).valid);
    CHECK(eval_pltl(*r.word, f, 0));
  }
  SECTION("an invariant carried by the idle run") {
    McResult r = mc_pltl(s, init, parse_pltl("G a"));
    REQUIRE(r.sat);
    CHECK(r.schemas_tried == 1);

    McResult c = mc_pltl(complete_deadlock_free(s), init, parse_pltl("G a"));
    CHECK(c.sat);
  }
  SECTION("the negated invariant is satisfiable as well, by a different run") {
    McResult r = mc_pltl(s, init, pltl_negate(parse_pltl("G a")));
    REQUIRE(r.sat);
    REQUIRE(r.word.has_value());
    CHECK_FALSE(eval_pltl(*r.word, parse_pltl("G a"), 0));
  }
  SECTION("universal claims hold when the negation is unsatisfiable") {
    McResult r = mc_pltl(s, init, parse_pltl("F(a & b)"));  // no state carries both
    CHECK_FALSE(r.sat);
    CHECK(r.schemas_tried == 15);  // the full schema census of fig1
    CHECK(r.ilp_calls == 0);       // every truncated word already fails
  }
  SECTION("no run starts outside q0") {
    McResult r = mc_pltl(s, init, parse_pltl("G b"));
    CHECK_FALSE(r.sat);
    CHECK(r.ilp_calls == 0);
    CHECK(r.evals >= 1);
    CHECK(r.evals <= r.leaves);
  }
  SECTION("pumping produces adjacent equal letters") {
    PltlFormula f = parse_pltl("F(b & X b) & F d");
    McResult r = mc_pltl(s, init, f);
    REQUIRE(r.sat);
    REQUIRE(r.witness.has_value());
    CHECK(validate_ips(s, init, IteratedPathSchema{r.witness->schema, r.witness->counts}).valid);
    CHECK(eval_pltl(*r.word, f, 0));
  }
  SECTION("the running temporal specification holds on every run") {
    McResult r = mc_pltl(s, init, pltl_negate(parse_pltl(kRunningPltl)));
    CHECK_FALSE(r.sat);
  }
}

TEST_CASE("first order model checking", "[mc]") {
  CounterSystem s = fig1_system();
  Configuration init = zero_init(s);

  SECTION("an existential position query") {
    FoFormula f = parse_fo("exists z. d(z)");
    McResult r = mc_fo(s, init, f);
    REQUIRE(r.sat);
    REQUIRE(r.witness.has_value());
    CHECK(validate_ips(s, init, IteratedPathSchema{r.witness->schema, r.witness->counts}).valid);
    CHECK(eval_fo(*r.word, f));
  }
  SECTION("an unsatisfiable query never reaches the solver") {
    McResult r = mc_fo(s, init, parse_fo("exists z. e(z)"));
    CHECK_FALSE(r.sat);
    CHECK(r.ilp_calls == 0);
  }
  SECTION("the running first order specification is vacuous on the idle run") {
    McResult r = mc_fo(s, init, parse_fo(kRunningFo));
    REQUIRE(r.sat);
    CHECK(r.schemas_tried == 1);  // ({a})^w has no b at all
    CHECK(r.leaves == 1);
    CHECK(r.ilp_calls == 1);
  }
  SECTION("universal letter claims fail as soon as a second letter appears") {
    CounterSystem t = two_state();
    Configuration tinit = zero_init(t);
    McResult r = mc_fo(t, tinit, parse_fo("forall x. a(x)"));
    CHECK_FALSE(r.sat);

    FoFormula f = parse_fo("exists x. exists y. (x < y & a(x) & b(y))");
    McResult q = mc_fo(t, tinit, f);
    REQUIRE(q.sat);
    CHECK(eval_fo(*q.word, f));
  }
}

TEST_CASE("threshold budgets are enforced before any search", "[mc]") {
  CounterSystem s = fig1_system();
  Configuration init = zero_init(s);

  McOptions tight;
  tight.threshold_budget = 5;
  CHECK_THROWS_AS(mc_pltl(s, init, parse_pltl("F d"), tight), McBudgetError);
  McResult r = mc_pltl(s, init, parse_pltl("d"), tight);  // depth 0 fits the budget
  CHECK_FALSE(r.sat);

  McOptions fo_tight;
  fo_tight.threshold_budget = 8;
  CHECK_FALSE(mc_fo(s, init, parse_fo("exists z. e(z)"), fo_tight).sat);
  CHECK_THROWS_AS(mc_fo(s, init, parse_fo("forall x. exists y. x < y"), fo_tight),
                  McBudgetError);
}

TEST_CASE("model checking requires a flat system", "[mc]") {
  CounterSystem s;
  s.dimension = 1;
  s.states = {State{"q0", {"a"}}};
  Matrix id = Matrix::identity(1);
  s.rules = {TransitionRule{"l0", "q0", "q0", Guard{}, AffineUpdate{id, {1}}},
             TransitionRule{"l1", "q0", "q0", Guard{}, AffineUpdate{id, {0}}}};
  CHECK_THROWS_AS(mc_pltl(s, zero_init(s), parse_pltl("a")), std::domain_error);
}

TEST_CASE("model checking agrees with explicit enumeration", "[mc]") {
  Rng rng(4242);
  SystemGenOptions opt;
  opt.max_states = 4;

  std::size_t mc_sat = 0, mc_unsat = 0, oracle_sat = 0;
  for (int trial = 0; trial < 60; ++trial) {
    CounterSystem s = random_flat_system(rng, opt);
    // Raw drawings frequently deadlock right away; completing every other
    // one guarantees a mix of satisfiable and unsatisfiable instances.
    if (trial % 2 == 0) s = complete_deadlock_free(s);
    Configuration init = zero_init(s);
    INFO("trial " << trial);

    PltlFormula f = random_pltl(rng, {"a", "b", "c"}, 1, 3);
    auto checker = [&](const LassoWord& w) { return eval_pltl(w, f, 0); };
    McResult r = mc_pltl(s, init, f);
    bool oracle = small_count_witness(s, init, 3, checker);
    if (oracle) {
      ++oracle_sat;
      REQUIRE(r.sat);
    }
    if (r.sat) {
      ++mc_sat;
      REQUIRE(r.witness.has_value());
      REQUIRE(validate_ips(s, init,
                           IteratedPathSchema{r.witness->schema, r.witness->counts})
                  .valid);
      REQUIRE(checker(*r.word));
    } else {
      ++mc_unsat;
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    CounterSystem s = random_flat_system(rng, opt);
    if (trial % 2 == 0) s = complete_deadlock_free(s);
    Configuration init = zero_init(s);
    INFO("fo trial " << trial);

    FoFormula f = random_fo(rng, {"a", "b", "c"}, 1, 2);
    auto checker = [&](const LassoWord& w) { return eval_fo(w, f); };
    McResult r = mc_fo(s, init, f);
    bool oracle = small_count_witness(s, init, 3, checker);
    if (oracle) {
      ++oracle_sat;
      REQUIRE(r.sat);
    }
    if (r.sat) {
      ++mc_sat;
      REQUIRE(validate_ips(s, init,
                           IteratedPathSchema{r.witness->schema, r.witness->counts})
                  .valid);
      REQUIRE(checker(*r.word));
    } else {
      ++mc_unsat;
    }
  }
  CHECK(oracle_sat >= 12);
  CHECK(mc_sat >= oracle_sat);
  CHECK(mc_unsat >= 20);
}
