#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "horizon/needle.hpp"

using namespace horizon;

namespace {

Rat rat(long num, long den) { return Rat(num, den); }

StepFunction random_step_function(std::mt19937& rng) {
  std::uniform_int_distribution<int> pieces_d(1, 5);
  std::uniform_int_distribution<long> num_d(0, 20);
  std::uniform_real_distribution<double> val_d(-2.0, 2.0);
  std::uniform_int_distribution<int> dim_d(1, 3);

  int n_pieces = pieces_d(rng);
  int dim = dim_d(rng);
  // distinct rational endpoints on a denominator-20 lattice; piece k lives in
  // the window [k, k+1), so the supports stay short and the exact subdivision
  // stays small
  std::vector<long> cuts;
  while (static_cast<int>(cuts.size()) < 2 * n_pieces) {
    long c = num_d(rng) + 20 * (static_cast<long>(cuts.size()) / 2);
    cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  StepFunction y;
  for (std::size_t k = 0; k + 1 < cuts.size(); k += 2) {
    StepPiece piece;
    piece.lo = rat(cuts[k], 20);
    piece.hi = rat(cuts[k + 1], 20);
    if (piece.lo == piece.hi) continue;
    piece.value = Vec(dim);
    for (int i = 0; i < dim; ++i) piece.value[i] = val_d(rng);
    y.pieces.push_back(piece);
  }
  if (y.pieces.empty()) {
    StepPiece piece;
    piece.lo = rat(0, 1);
    piece.hi = rat(1, 1);
    piece.value = Vec(dim);
    piece.value.setOnes();
    y.pieces.push_back(piece);
  }
  return y;
}

}  // namespace

TEST_CASE("interval set arithmetic is exact") {
  auto a = IntervalSet::interval(rat(0, 1), rat(1, 2));
  auto b = IntervalSet::interval(rat(1, 3), rat(2, 3));
  CHECK(a.unite(b).measure() == rat(2, 3));
  CHECK(a.intersect(b).measure() == rat(1, 6));
  CHECK(a.disjoint_with(IntervalSet::interval(rat(1, 2), rat(3, 4))));
  CHECK_FALSE(a.disjoint_with(b));

  auto slice = a.measure_slice(rat(1, 4), rat(3, 4));
  CHECK(slice.measure() == rat(1, 4));
  CHECK(a.contains_set(slice));
}

TEST_CASE("variation sets satisfy the exact construction identities") {
  std::mt19937 rng(2024);
  std::vector<Rat> alphas = {rat(1, 8), rat(1, 5), rat(1, 3)};

  for (int trial = 0; trial < 50; ++trial) {
    auto y = random_step_function(rng);
    int d = 1 + trial % 3;
    std::vector<Rat> usable;
    for (const auto& a : alphas)
      if (a <= Rat(1, d)) usable.push_back(a);
    auto family = build_variation_sets(y, 0.25, usable, d);
    Rat K_measure = family.K.measure();
    CHECK(K_measure == y.support().measure());
    CHECK(family.Delta == Rat(1, d));

    for (int i = 1; i <= d; ++i) {
      IntervalSet prev;
      Rat prev_alpha(0);
      for (const auto& alpha : usable) {
        auto M = family.variation_set(i, alpha);
        // exact measure identity |M_i(alpha)| = alpha |K|
        CHECK(M.measure() == alpha * K_measure);
        // nesting in alpha
        if (prev_alpha > 0) CHECK(M.contains_set(prev));
        prev = M;
        prev_alpha = alpha;
      }
      // disjointness across directions at the simplex radius
      for (int i2 = i + 1; i2 <= d; ++i2) {
        auto Mi = family.variation_set(i, Rat(1, d));
        auto Mj = family.variation_set(i2, Rat(1, d));
        CHECK(Mi.disjoint_with(Mj));
      }
    }
  }
}

TEST_CASE("the sup bound of the construction holds in every trial") {
  std::mt19937 rng(7);
  std::vector<Rat> alphas = {rat(1, 10), rat(1, 4), rat(2, 5), rat(1, 2)};

  for (int trial = 0; trial < 50; ++trial) {
    auto y = random_step_function(rng);
    double delta = 0.2 + 0.02 * (trial % 7);
    auto family = build_variation_sets(y, delta, alphas, 1);
    for (std::size_t a = 0; a + 1 < alphas.size(); ++a) {
      double gap = needle_sup_bound_gap(family, y, 1, alphas[a], alphas[a + 1]);
      double allowance =
          delta * std::abs(static_cast<double>(alphas[a] - alphas[a + 1]));
      CHECK(gap <= allowance + 1e-12);
    }
  }
}

TEST_CASE("needle controls overlay the directions on the variation sets") {
  StepFunction y;
  StepPiece piece;
  piece.lo = rat(0, 1);
  piece.hi = rat(2, 1);
  piece.value = Vec(1);
  piece.value << 1.0;
  y.pieces.push_back(piece);

  std::vector<Rat> alphas = {rat(1, 4)};
  auto family = build_variation_sets(y, 0.1, alphas, 1);
  auto u_star = [](double) { return Vec(Vec::Zero(1)); };
  std::vector<std::function<Vec(double)>> dirs = {
      [](double) { return Vec(Vec::Ones(1)); }};
  auto u = needle_control(u_star, dirs, family, alphas);

  // the overlay turns on exactly on M_1(1/4), which has measure 1/2 here
  auto M = family.variation_set(1, rat(1, 4));
  CHECK(M.measure() == rat(1, 2));
  double on = 0.0;
  int samples = 4000;
  for (int k = 0; k < samples; ++k) {
    double t = 2.0 * (k + 0.5) / samples;
    on += u(t)[0];
  }
  CHECK(on * 2.0 / samples == doctest::Approx(0.5).epsilon(0.01));
}
