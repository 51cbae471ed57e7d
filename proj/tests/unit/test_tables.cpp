#include "doctest.h"

#include <cmath>
#include <set>

#include "spde_lrt/error.hpp"
#include "spde_lrt/tables.hpp"

using namespace spde_lrt;

namespace {

TableOverrides bound_only() {
  TableOverrides o;
  o.bound_only = true;
  return o;
}

}  // namespace

TEST_CASE("significant-figure rounding") {
  CHECK(round_sig(1.585e-4, 2) == 1.6e-4);
  CHECK(round_sig(3.979e-12, 1) == 4e-12);
  CHECK(round_sig(9.991e-20, 1) == 1e-19);
  CHECK(round_sig(0.0156, 2) == 0.016);
  CHECK(round_sig(-2.449, 3) == -2.45);
  CHECK(round_sig(0.0, 3) == 0.0);
}

TEST_CASE("cell seeds differ across tables and columns") {
  std::set<std::uint64_t> seen;
  for (int t = 1; t <= 5; ++t) {
    for (std::size_t c = 0; c < 18; ++c) seen.insert(cell_seed(kDefaultSeed, t, c));
  }
  CHECK(seen.size() == 5 * 18);
  CHECK(cell_seed(1, 1, 0) == cell_seed(1, 1, 0));
}

TEST_CASE("column keys of every preset") {
  CHECK(reproduce_table(1, bound_only()).col_keys.size() == 18);
  CHECK(reproduce_table(1, bound_only()).col_keys.front() == "dT=1");
  CHECK(reproduce_table(1, bound_only()).col_keys.back() == "dT=0.02");
  CHECK(reproduce_table(2, bound_only()).col_keys ==
        std::vector<std::string>{"alpha=0.1", "alpha=0.05", "alpha=0.01", "alpha=0.005"});
  CHECK(reproduce_table(3, bound_only()).col_keys ==
        std::vector<std::string>{"T=818", "T=1318", "T=1818", "T=2318", "T=2818", "T=3318"});
  CHECK(reproduce_table(4, bound_only()).col_keys.size() == 6);
  CHECK(reproduce_table(5, bound_only()).col_keys.back() == "N=80");
}

TEST_CASE("closed-form rows match the printed values") {
  const TableResult t2 = reproduce_table(2, bound_only());
  CHECK(t2.cells.size() == 4);
  CHECK(t2.all_checked_within());
  CHECK(t2.find("T_b1", "alpha=0.05")->estimate == doctest::Approx(818.305).epsilon(1e-6));

  const TableResult t4 = reproduce_table(4, bound_only());
  CHECK(t4.cells.size() == 6);
  CHECK(t4.all_checked_within());
  const TableCell* c = t4.find("bound", "T=10");
  REQUIRE(c);
  CHECK(c->estimate == doctest::Approx(std::exp(-8.75)).epsilon(1e-14));
  CHECK(t4.find("RT0", "T=10") == nullptr);
}

TEST_CASE("tolerance rule") {
  TableCell c;
  c.published = PrintedValue{0.01, 2};
  c.estimate = 0.014;
  c.checked = true;
  c.tol_floor = 0.005;
  CHECK(c.within());
  c.estimate = 0.0151;
  CHECK_FALSE(c.within());
  c.mc = make_estimate(TestKind::rt0, ErrorKind::type1, 15, 1000);
  c.tol_stderr_mult = 4.0;
  CHECK(c.tolerance() == doctest::Approx(4.0 * c.mc->std_error));
  CHECK(c.within());
  c.upper_limit = 0.015;
  CHECK_FALSE(c.within());
}

TEST_CASE("one Monte Carlo column on its own") {
  TableOverrides o;
  o.m = 200;
  o.columns = {"dT=1"};
  const TableResult t = reproduce_table(1, o);
  REQUIRE(t.cells.size() == 2);
  CHECK(t.cells[0].steps == 100);
  CHECK(t.cells[0].seed == cell_seed(t.base_seed, 1, 0));
  CHECK(t.cells[0].mc->m == 200);
  CHECK(reproduce_table(1, o).cells[1].mc->canonical() == t.cells[1].mc->canonical());
}

TEST_CASE("invalid requests") {
  CHECK_THROWS_AS(reproduce_table(0), DomainError);
  CHECK_THROWS_AS(reproduce_table(6), DomainError);
  TableOverrides o;
  o.m = 0;
  CHECK_THROWS_AS(reproduce_table(1, o), DomainError);
}
