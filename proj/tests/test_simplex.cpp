#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "doctest.h"
#include "stochround/lp.hpp"
#include "stochround/rng.hpp"
#include "stochround/simplex.hpp"

using namespace stochround;
using Rational = boost::multiprecision::cpp_rational;

TEST_CASE("one-variable covering program") {
  LinearProgram lp;
  int x = lp.add_var("x", 1.0);
  lp.add_row("c", RowSense::Ge, 1.0, {{x, 1.0}});
  SimplexResult res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.x[0] == doctest::Approx(1.0));
  CHECK(res.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("textbook maximization reaches the known corner") {
  LinearProgram lp;
  lp.maximize = true;
  int x = lp.add_var("x", 3.0);
  int y = lp.add_var("y", 5.0);
  lp.add_row("r1", RowSense::Le, 4.0, {{x, 1.0}});
  lp.add_row("r2", RowSense::Le, 12.0, {{y, 2.0}});
  lp.add_row("r3", RowSense::Le, 18.0, {{x, 3.0}, {y, 2.0}});
  SimplexResult res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(36.0));
  CHECK(res.x[x] == doctest::Approx(2.0));
  CHECK(res.x[y] == doctest::Approx(6.0));
  CHECK(res.row_dual[0] == doctest::Approx(0.0));
  CHECK(res.row_dual[1] == doctest::Approx(1.5));
  CHECK(res.row_dual[2] == doctest::Approx(1.0));
}

TEST_CASE("equality rows") {
  LinearProgram lp;
  int x = lp.add_var("x", 1.0);
  int y = lp.add_var("y", 1.0);
  lp.add_row("sum", RowSense::Eq, 1.0, {{x, 1.0}, {y, 1.0}});
  lp.add_row("diff", RowSense::Eq, 0.0, {{x, 1.0}, {y, -1.0}});
  SimplexResult res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.x[x] == doctest::Approx(0.5));
  CHECK(res.x[y] == doctest::Approx(0.5));
}

TEST_CASE("variable bounds are honored") {
  LinearProgram lp;
  int x = lp.add_var("x", -1.0, 1.0, 2.0);
  SimplexResult res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.x[x] == doctest::Approx(2.0));
  CHECK(res.objective == doctest::Approx(-2.0));

  LinearProgram lp2;
  int z = lp2.add_var("z", 1.0, 1.0, 2.0);
  SimplexResult res2 = solve_lp(lp2);
  REQUIRE(res2.status == SolveStatus::Optimal);
  CHECK(res2.x[z] == doctest::Approx(1.0));
  CHECK(res2.objective == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded are reported distinctly") {
  LinearProgram lp;
  int x = lp.add_var("x", 1.0);
  lp.add_row("low", RowSense::Ge, 1.0, {{x, 1.0}});
  lp.add_row("high", RowSense::Le, 0.5, {{x, 1.0}});
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);

  LinearProgram lp2;
  lp2.maximize = true;
  lp2.add_var("x", 1.0);
  CHECK(solve_lp(lp2).status == SolveStatus::Unbounded);

  LinearProgram lp3;  // unbounded with a row present
  lp3.maximize = true;
  int a = lp3.add_var("a", 1.0);
  int b = lp3.add_var("b", 0.0);
  lp3.add_row("r", RowSense::Ge, 1.0, {{a, 1.0}, {b, 1.0}});
  CHECK(solve_lp(lp3).status == SolveStatus::Unbounded);
}

TEST_CASE("classic degenerate cycling example terminates at its optimum") {
  // Beale's example; Dantzig pricing cycles on it without an anti-cycling rule.
  LinearProgram lp;
  int a = lp.add_var("a", -0.75);
  int b = lp.add_var("b", 150.0);
  int c = lp.add_var("c", -0.02);
  int d = lp.add_var("d", 6.0);
  lp.add_row("r1", RowSense::Le, 0.0, {{a, 0.25}, {b, -60.0}, {c, -0.04}, {d, 9.0}});
  lp.add_row("r2", RowSense::Le, 0.0, {{a, 0.5}, {b, -90.0}, {c, -0.02}, {d, 3.0}});
  lp.add_row("r3", RowSense::Le, 1.0, {{c, 1.0}});
  SimplexResult res = solve_lp(lp);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-0.05));
}

namespace {

// Exact-arithmetic certificate for a basis returned on min{cx : Ax >= b, x >= 0}
// with b >= 0: standard-form columns are [A | -I], slack of row r at n+r.
struct ExactCheck {
  Rational objective;
  bool feasible = false;
  bool optimal = false;
};

ExactCheck certify_basis(const LinearProgram& lp, const std::vector<int>& basis) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, 0));
  auto col_entry = [&](int col, int row) -> Rational {
    if (col < n) {
      for (const auto& [c2, v] : lp.rows[row])
        if (c2 == col) return Rational(v);
      return 0;
    }
    return col - n == row ? Rational(-1) : Rational(0);
  };
  for (int r = 0; r < m; ++r)
    for (int k = 0; k < m; ++k) a[r][k] = col_entry(basis[k], r);

  // Solve B xb = b and y B = c_B by Gaussian elimination on the bordered system.
  std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(2 * m + 1, 0));
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k < m; ++k) aug[r][k] = a[r][k];
    aug[r][m] = Rational(lp.rhs[r]);
    aug[r][m + 1 + r] = 1;  // identity for B^-1
  }
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (aug[r][col] != 0) {
        piv = r;
        break;
      }
    REQUIRE(piv >= 0);
    std::swap(aug[piv], aug[col]);
    Rational p = aug[col][col];
    for (auto& v : aug[col]) v /= p;
    for (int r = 0; r < m; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      Rational f = aug[r][col];
      for (int k = 0; k <= 2 * m; ++k) aug[r][k] -= f * aug[col][k];
    }
  }

  ExactCheck out;
  out.feasible = true;
  std::vector<Rational> xb(m);
  for (int r = 0; r < m; ++r) {
    xb[r] = aug[r][m];
    if (xb[r] < 0) out.feasible = false;
  }
  std::vector<Rational> cb(m, 0);
  for (int k = 0; k < m; ++k)
    if (basis[k] < n) cb[k] = Rational(lp.objective[basis[k]]);
  out.objective = 0;
  for (int k = 0; k < m; ++k) out.objective += cb[k] * xb[k];

  std::vector<Rational> y(m, 0);  // y = cb * B^-1
  for (int r = 0; r < m; ++r)
    for (int k = 0; k < m; ++k) y[r] += cb[k] * aug[k][m + 1 + r];
  out.optimal = true;
  for (int j = 0; j < n; ++j) {
    Rational red = Rational(lp.objective[j]);
    for (int r = 0; r < m; ++r) red -= y[r] * col_entry(j, r);
    if (red < 0) out.optimal = false;
  }
  for (int r = 0; r < m; ++r)
    if (y[r] < 0) out.optimal = false;  // slack reduced cost is y_r
  return out;
}

}  // namespace

TEST_CASE("random covering bases are optimal in exact rational arithmetic") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed);
    const int n = 5, m = 5;
    LinearProgram lp;
    for (int j = 0; j < n; ++j)
      lp.add_var("x" + std::to_string(j), (8 + static_cast<double>(rng.below(25))) / 16.0);
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> entries;
      for (int j = 0; j < n; ++j) {
        double v = static_cast<double>(rng.below(32)) / 16.0;  // dyadic, exact in binary
        if (r == j && v < 0.5) v += 0.5;
        if (v > 0) entries.emplace_back(j, v);
      }
      lp.add_row("r" + std::to_string(r), RowSense::Ge,
                 (16 + static_cast<double>(rng.below(17))) / 16.0, entries);
    }
    SimplexResult res = solve_lp(lp);
    REQUIRE(res.status == SolveStatus::Optimal);
    for (int id : res.basis) REQUIRE(id < n + m);  // no artificial stuck in the basis

    ExactCheck exact = certify_basis(lp, res.basis);
    CHECK(exact.feasible);
    CHECK(exact.optimal);
    CHECK(res.objective ==
          doctest::Approx(static_cast<double>(exact.objective)).epsilon(1e-9));

    // strong duality through the returned row duals
    double dual_obj = 0;
    for (int r = 0; r < m; ++r) {
      CHECK(res.row_dual[r] >= -1e-9);
      dual_obj += res.row_dual[r] * lp.rhs[r];
    }
    CHECK(dual_obj == doctest::Approx(res.objective).epsilon(1e-8));
  }
}
