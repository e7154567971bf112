#include <doctest.h>

#include "proxima/oracle.hpp"

using namespace proxima;

TEST_CASE("reference_best_proximity") {
  const auto m = make_example1<double>({0.9, 5.0});
  const auto ref = reference_best_proximity(m, Vector{50.0, -20.0});
  CHECK(ref.method == ReferenceMethod::Exact);
  CHECK(ref.xi == Vector{1.0, 0.0});
  CHECK(ref.t_xi == Vector{-1.0, 0.0});
  CHECK(ref.achieved_gap == 0.0);
  CHECK(ref.period_error == 0.0);
  CHECK(m.space.distance(ref.iterated, ref.xi) <= 1e-10);
  CHECK(ref.steps > 0);

  auto unknown = m;
  unknown.known_best_proximity.reset();
  const auto iterated = reference_best_proximity(unknown, Vector{50.0, -20.0});
  CHECK(iterated.method == ReferenceMethod::IteratedToPrecision);
  CHECK(iterated.achieved_gap < 1e-13);

  CHECK_THROWS_AS(reference_best_proximity(m, Vector{-5.0, 0.0}), InputError);
  CHECK_THROWS_AS(reference_best_proximity(m, Vector{50.0, -20.0}, 1e-13, 4), NumericalError);
}

TEST_CASE("audit_soundness") {
  for (double p : {1.1, 2.0, 20.0}) {
    const auto m = make_example1<HighPrecision>({0.5, p});
    const auto report =
        audit_soundness(m, BasicVector<HighPrecision>(Vector{1000.0, 8.0}), 60);
    CHECK(report.passed());
    CHECK(report.rows.size() == 30);
    for (const auto& row : report.rows) {
      CHECK(row.apriori_ratio >= 1.0);
      CHECK(row.aposteriori_ratio >= 1.0);
    }
  }
  // A map that under-declares its contraction coefficient gets caught.
  auto wrong = make_example1<HighPrecision>({0.9, 2.0});
  wrong.k = 0.1;
  const auto bad = audit_soundness(wrong, BasicVector<HighPrecision>(Vector{1000.0, 8.0}), 40);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.first_violation.has_value());
  CHECK(bad.first_violation->step >= 2);
}

TEST_CASE("paper_table") {
  const auto& post = paper_table(TableKind::APosteriori);
  CHECK(post.eps.size() == 5);
  CHECK(post.ps == std::vector<double>{1.1, 1.5, 2.0, 3.0, 5.0, 20.0});
  CHECK(post.cells[2][4] == 132);
  CHECK(post.cells[0][5] == 266);
  const auto& prior = paper_table(TableKind::APriori);
  CHECK(prior.cells[4][5] == 960);
  CHECK(to_string(TableKind::APriori) == "apriori");
}

TEST_CASE("reproduce_table") {
  const Vector x0{1000.0, 8.0};
  SUBCASE("a posteriori cells") {
    const auto t = reproduce_table(TableKind::APosteriori, 0.5, x0, {1e-6, 1e-2}, {5.0, 20.0});
    CHECK(t.counts.cells[0][0] == 132);
    CHECK(t.counts.cells[1][1] == 266);
    CHECK(t.has_paper_data());
    CHECK(t.max_abs_delta() == 0);
  }
  SUBCASE("a priori cell") {
    const auto t = reproduce_table(TableKind::APriori, 0.5, x0, {1e-10}, {20.0});
    CHECK(t.counts.cells[0][0] == 988);
    CHECK(t.paper_counts[0][0] == 960);
    CHECK(t.deltas[0][0] == 28);
  }
  SUBCASE("off-paper configurations carry no comparison") {
    const auto t = reproduce_table(TableKind::APosteriori, 0.3, x0, {1e-2}, {2.0});
    CHECK_FALSE(t.has_paper_data());
    CHECK(t.max_abs_delta() == 0);
    CHECK(t.counts.cells[0][0] % 2 == 0);
  }
  SUBCASE("double precision cannot certify small eps") {
    CHECK_THROWS_AS(reproduce_table(TableKind::APosteriori, 0.5, x0, {1e-10}, {2.0},
                                    Precision::Double),
                    BudgetExhausted<double>);
  }
  SUBCASE("input errors") {
    CHECK_THROWS_AS(reproduce_table(TableKind::APriori, 1.5, x0, {1e-2}, {2.0}), InputError);
    CHECK_THROWS_AS(reproduce_table(TableKind::APriori, 0.5, x0, {}, {2.0}), InputError);
    CHECK_THROWS_AS(reproduce_table(TableKind::APriori, 0.5, x0, {1e-2}, {1.0}), InputError);
  }
}

TEST_CASE("rederive_distance") {
  for (double p : {1.5, 2.0}) {
    const auto m = make_example1<double>({0.5, p});
    const double d = rederive_distance(m, 200, 11);
    CHECK(d >= 2.0 - 1e-6);
    CHECK(d <= 2.0 + 1e-3);
  }
  auto over = make_example1<double>({0.5, 2.0});
  over.d = 2.5;
  CHECK_THROWS_AS(rederive_distance(over, 200, 11), DeclarationError);
  CHECK_THROWS_AS(rederive_distance(over, 0, 11), InputError);
}
