#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>
#include <tuple>

#include "lpkit/lp.hpp"
#include "lpkit/mps.hpp"
#include "lpkit/rng.hpp"
#include "support/random_lp.hpp"

using namespace lpkit;

TEST_CASE("empty problem") {
  LPProblem lp;
  CHECK(lp.nnz() == 0);
  CHECK(lp.num_rows() == 0);
  CHECK(lp.num_cols() == 0);
}

TEST_CASE("entry bookkeeping") {
  LPProblem lp;
  for (int i = 0; i < 3; ++i) lp.add_row(0.0, 1.0);
  for (int j = 0; j < 2; ++j) lp.add_col(0.0, 1.0, 1.0);
  lp.set_coef(0, 0, 1.0);
  lp.set_coef(0, 1, 2.0);
  lp.set_coef(1, 0, 3.0);
  lp.set_coef(2, 1, 4.0);
  CHECK(lp.nnz() == 4);

  SUBCASE("setting zero erases") {
    lp.set_coef(0, 1, 0.0);
    CHECK(lp.nnz() == 3);
    CHECK(lp.coef(0, 1) == 0.0);
    CHECK(lp.row(0).size() == 1);
    CHECK(lp.col(1).size() == 1);
  }

  SUBCASE("tiny values are dropped") {
    lp.set_coef(1, 1, 1e-13);
    CHECK(lp.nnz() == 4);
    lp.set_coef(0, 0, 1e-13);  // overwrite live entry with a droppable value
    CHECK(lp.nnz() == 3);
  }

  SUBCASE("remove the only rows") {
    lp.remove_row(0);
    lp.remove_row(1);
    lp.remove_row(2);
    CHECK(lp.num_rows() == 0);
    CHECK(lp.nnz() == 0);
    CHECK(lp.col(0).empty());
    CHECK(lp.col(1).empty());
  }
}

TEST_CASE("row and column views expose the same triples") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    testing::RandomLpOptions o;
    o.rows = 8;
    o.cols = 8;
    LPProblem lp = testing::random_lp(rng, o);
    std::set<std::tuple<int, int, double>> from_rows, from_cols;
    for (int i = 0; i < lp.row_limit(); ++i) {
      if (!lp.row_active(i)) continue;
      int prev = -1;
      for (const MatrixEntry& e : lp.row(i)) {
        CHECK(e.index > prev);  // ascending order within the view
        prev = e.index;
        from_rows.emplace(i, e.index, e.value);
      }
    }
    for (int j = 0; j < lp.col_limit(); ++j) {
      if (!lp.col_active(j)) continue;
      int prev = -1;
      for (const MatrixEntry& e : lp.col(j)) {
        CHECK(e.index > prev);
        prev = e.index;
        from_cols.emplace(e.index, j, e.value);
      }
    }
    CHECK(from_rows == from_cols);
    CHECK(static_cast<std::int64_t>(from_rows.size()) == lp.nnz());
  }
}

TEST_CASE("remove_col_fixed shifts row bounds and offset") {
  LPProblem lp;
  lp.add_row(1.0, 5.0);
  lp.add_row(-kInfinity, 2.0);
  lp.add_col(0.0, 3.0, 2.0);
  lp.add_col(0.0, 3.0, 1.0);
  lp.set_coef(0, 0, 2.0);
  lp.set_coef(0, 1, 1.0);
  lp.set_coef(1, 0, -1.0);
  auto touched = lp.remove_col_fixed(0, 1.5);
  CHECK(touched == std::vector<int>{0, 1});
  CHECK(lp.row_lower(0) == doctest::Approx(1.0 - 3.0));
  CHECK(lp.row_upper(0) == doctest::Approx(5.0 - 3.0));
  CHECK(lp.row_lower(1) == -kInfinity);
  CHECK(lp.row_upper(1) == doctest::Approx(2.0 + 1.5));
  CHECK(lp.obj_offset() == doctest::Approx(3.0));
  CHECK(lp.num_cols() == 1);
  CHECK(lp.nnz() == 1);
  CHECK_FALSE(lp.col_active(0));
}

TEST_CASE("tombstoned indices stay stable until compact") {
  LPProblem lp;
  for (int i = 0; i < 3; ++i) lp.add_row(0.0, double(i) + 1.0);
  for (int j = 0; j < 3; ++j) lp.add_col(0.0, 1.0, double(j));
  lp.set_coef(0, 0, 1.0);
  lp.set_coef(1, 1, 2.0);
  lp.set_coef(2, 2, 3.0);
  lp.remove_row(1);
  lp.remove_col(1);
  CHECK(lp.num_rows() == 2);
  CHECK(lp.num_cols() == 2);
  CHECK(lp.row_limit() == 3);
  CHECK(lp.coef(2, 2) == 3.0);  // untouched slots keep their ids

  auto maps = lp.compact();
  CHECK(maps.old_row_limit == 3);
  CHECK(maps.row_of == std::vector<int>{0, 2});
  CHECK(maps.col_of == std::vector<int>{0, 2});
  CHECK(lp.row_limit() == 2);
  CHECK(lp.coef(1, 1) == 3.0);
  CHECK(lp.row_upper(1) == doctest::Approx(3.0));
  CHECK(lp.obj(1) == doctest::Approx(2.0));
  CHECK(lp.nnz() == 2);
}

TEST_CASE("extended real arithmetic rejects inf minus inf") {
  CHECK(ext_add(kInfinity, 5.0) == kInfinity);
  CHECK(ext_add(-kInfinity, 5.0) == -kInfinity);
  CHECK_THROWS_AS(ext_add(kInfinity, -kInfinity), std::domain_error);
  CHECK(ext_mul(-2.0, kInfinity) == -kInfinity);
  CHECK(ext_mul(-2.0, -kInfinity) == kInfinity);
}

TEST_CASE("mps round trip is exact") {
  Rng rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    testing::RandomLpOptions o;
    o.rows = 7;
    o.cols = 9;
    o.infinite_bound_frac = 0.3;
    o.free_col_frac = 0.1;
    o.feasible = (trial % 2 == 0);
    LPProblem lp = testing::random_lp(rng, o);
    if (trial == 0) lp.set_obj_offset(2.5);
    std::ostringstream out;
    write_mps(lp, out);
    std::istringstream in(out.str());
    LPProblem back = read_mps(in);
    CHECK(back == lp);
  }
}

TEST_CASE("mps round trip covers free rows and negative boxes") {
  LPProblem lp;
  lp.add_row(-kInfinity, kInfinity);  // free row
  lp.add_row(2.0, 2.0);
  lp.add_row(-1.0, 4.0);
  lp.add_col(-3.0, -1.0, 1.0);   // negative box exercises the UP quirk guard
  lp.add_col(-kInfinity, 5.0, 0.0);
  lp.add_col(4.0, 4.0, -2.0);
  lp.set_coef(0, 0, 1.0);
  lp.set_coef(1, 0, 1.5);
  lp.set_coef(1, 1, -2.0);
  lp.set_coef(2, 2, 7.0);
  std::ostringstream out;
  write_mps(lp, out);
  std::istringstream in(out.str());
  LPProblem back = read_mps(in);
  CHECK(back == lp);
}

TEST_CASE("mps reader reports malformed input with a line number") {
  std::istringstream bad1("ROWS\n N COST\nBOGUS_SECTION\nENDATA\n");
  CHECK_THROWS_WITH_AS(read_mps(bad1), doctest::Contains("line 3"), std::runtime_error);

  std::istringstream bad2("ROWS\n N COST\n Z R1\nENDATA\n");
  CHECK_THROWS_WITH_AS(read_mps(bad2), doctest::Contains("line 3"), std::runtime_error);

  std::istringstream bad3("ROWS\n N COST\n L R1\nCOLUMNS\n X R9 1.0\nENDATA\n");
  CHECK_THROWS_WITH_AS(read_mps(bad3), doctest::Contains("unknown row"), std::runtime_error);

  std::istringstream bad4("ROWS\n N COST\n L R1\nCOLUMNS\n X R1 abc\nENDATA\n");
  CHECK_THROWS_WITH_AS(read_mps(bad4), doctest::Contains("bad number"), std::runtime_error);

  std::istringstream bad5("ROWS\n N COST\n");
  CHECK_THROWS_WITH_AS(read_mps(bad5), doctest::Contains("ENDATA"), std::runtime_error);
}

TEST_CASE("mps reader handles classic fixed-format input") {
  std::string text =
      "* sample\n"
      "NAME          TEST1\n"
      "ROWS\n"
      " N  COST\n"
      " L  LIM1\n"
      " G  LIM2\n"
      " E  EQ1\n"
      "COLUMNS\n"
      "    X1        COST         1.0   LIM1         1.0\n"
      "    X1        LIM2         1.0\n"
      "    X2        COST         2.0   LIM1         1.0\n"
      "    X2        EQ1          1.0\n"
      "RHS\n"
      "    RHS       LIM1         4.0   LIM2         1.0\n"
      "    RHS       EQ1          3.0\n"
      "RANGES\n"
      "    RNG       LIM2         2.5\n"
      "BOUNDS\n"
      " UP BND       X1           4.0\n"
      " MI BND       X2\n"
      "ENDATA\n";
  std::istringstream in(text);
  LPProblem lp = read_mps(in);
  CHECK(lp.num_rows() == 3);
  CHECK(lp.num_cols() == 2);
  CHECK(lp.row_upper(0) == 4.0);
  CHECK(lp.row_lower(0) == -kInfinity);
  CHECK(lp.row_lower(1) == 1.0);
  CHECK(lp.row_upper(1) == doctest::Approx(3.5));
  CHECK(lp.row_lower(2) == 3.0);
  CHECK(lp.row_upper(2) == 3.0);
  CHECK(lp.obj(0) == 1.0);
  CHECK(lp.obj(1) == 2.0);
  CHECK(lp.col_upper(0) == 4.0);
  CHECK(lp.col_lower(0) == 0.0);
  CHECK(lp.col_lower(1) == -kInfinity);
}
