#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <drgkit/drg.hpp>
#include <drgkit/families.hpp>

#include <algorithm>
#include <numeric>

using namespace drgkit;

namespace {

// Independent ordering oracle: try every permutation fixing 0 and test the
// triangle zero-pattern directly on the Krein table.
template <class S>
std::vector<std::vector<int>> brute_force_orderings(const DrgProfile<S>& pr) {
  const int D = pr.D;
  double qmax = 0.0;
  for (const auto& qh : pr.q)
    for (const auto& qi : qh)
      for (const S& x : qi) qmax = std::max(qmax, std::fabs(to_double(x)));
  std::vector<int> perm(D);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> found;
  do {
    std::vector<int> ord(D + 1, 0);
    for (int i = 0; i < D; ++i) ord[i + 1] = perm[i];
    bool ok = true;
    for (int h = 0; h <= D && ok; ++h)
      for (int i = 0; i <= D && ok; ++i)
        for (int j = 0; j <= D && ok; ++j) {
          bool z = krein_is_zero(pr, ord[h], ord[i], ord[j], qmax);
          if (h > i + j || i > h + j || j > h + i) {
            if (!z) ok = false;
          } else if (h == i + j || i == h + j || j == h + i) {
            if (z) ok = false;
          }
        }
    if (ok) found.push_back(ord);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(found.begin(), found.end());
  return found;
}

long long binom_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("hamming(3,2) intersection numbers") {
  auto pr = certify<Rational>(hamming(3, 2));
  CHECK(pr.D == 3);
  CHECK(pr.kdeg == std::vector<long>{1, 3, 3, 1});
  // c_i, a_i, b_i read off p[h][1][*]
  CHECK(pr.p[1][1][0] == 1);
  CHECK(pr.p[2][1][1] == 2);
  CHECK(pr.p[3][1][2] == 3);
  CHECK(pr.p[0][1][1] == 3);
  CHECK(pr.p[1][1][2] == 2);
  CHECK(pr.p[2][1][3] == 1);
  CHECK(pr.p[1][1][1] == 0);
  CHECK(pr.p[2][1][2] == 0);
  // symmetric in the lower pair
  for (int h = 0; h <= 3; ++h)
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) CHECK(pr.p[h][i][j] == pr.p[h][j][i]);
}

TEST_CASE("frozen spectra of the small corpus") {
  auto h32 = certify<Rational>(hamming(3, 2));
  CHECK(h32.theta == std::vector<Rational>{rat(3), rat(1), rat(-1), rat(-3)});
  CHECK(h32.mult == std::vector<long>{1, 3, 3, 1});

  auto j63 = certify<Rational>(johnson(6, 3));
  CHECK(j63.theta == std::vector<Rational>{rat(9), rat(3), rat(-1), rat(-3)});
  CHECK(j63.mult == std::vector<long>{1, 5, 9, 5});

  auto h33 = certify<Rational>(hamming(3, 3));
  CHECK(h33.theta == std::vector<Rational>{rat(6), rat(3), rat(0), rat(-3)});
  CHECK(h33.mult == std::vector<long>{1, 6, 12, 8});

  auto h42 = certify<Rational>(hamming(4, 2));
  CHECK(h42.theta == std::vector<Rational>{rat(4), rat(2), rat(0), rat(-2), rat(-4)});
  CHECK(h42.mult == std::vector<long>{1, 4, 6, 4, 1});

  auto c6 = certify<Rational>(cycle(6));
  CHECK(c6.theta == std::vector<Rational>{rat(2), rat(1), rat(-1), rat(-2)});
  CHECK(c6.mult == std::vector<long>{1, 2, 2, 1});

  auto j73 = certify<Rational>(johnson(7, 3));
  CHECK(j73.theta == std::vector<Rational>{rat(12), rat(5), rat(0), rat(-3)});
  CHECK(j73.mult == std::vector<long>{1, 6, 14, 14});
}

TEST_CASE("family spectra match the closed forms") {
  for (auto [Dq, q] : {std::pair<int, int>{3, 2}, {3, 3}, {4, 2}}) {
    auto pr = certify<Rational>(hamming(Dq, q));
    for (int i = 0; i <= Dq; ++i) {
      CHECK(pr.theta[i] == rat(static_cast<long>(Dq) * (q - 1) - static_cast<long>(q) * i));
      long long m = binom_ll(Dq, i);
      for (int t = 0; t < i; ++t) m *= (q - 1);
      CHECK(pr.mult[i] == m);
    }
  }
  for (auto [nn, k] : {std::pair<int, int>{6, 3}, {7, 3}}) {
    auto pr = certify<Rational>(johnson(nn, k));
    for (int i = 0; i <= k; ++i) {
      CHECK(pr.theta[i] ==
            rat(static_cast<long>(k - i) * (nn - k - i) - static_cast<long>(i)));
      CHECK(pr.mult[i] == binom_ll(nn, i) - binom_ll(nn, i - 1));
    }
  }
}

TEST_CASE("float spectrum agrees with the exact one") {
  auto ex = certify<Rational>(johnson(6, 3));
  auto fl = certify<double>(johnson(6, 3));
  REQUIRE(fl.theta.size() == ex.theta.size());
  for (std::size_t i = 0; i < ex.theta.size(); ++i)
    CHECK(fl.theta[i] == doctest::Approx(to_double(ex.theta[i])).epsilon(1e-10));
  CHECK(fl.mult == ex.mult);
}

TEST_CASE("idempotents: orthogonal decomposition of the identity") {
  auto pr = certify<Rational>(hamming(3, 2));
  const std::size_t n = pr.n();
  Matrix<Rational> total(n, n);
  for (int i = 0; i <= pr.D; ++i) {
    total = total + pr.E[i];
    for (int j = 0; j <= pr.D; ++j) {
      Matrix<Rational> prod = pr.E[i] * pr.E[j];
      Matrix<Rational> want = (i == j) ? pr.E[i] : Matrix<Rational>(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) CHECK(prod(r, c) == want(r, c));
    }
    // eigenbasis columns span the idempotent's image
    CHECK(pr.EB[i].cols() == static_cast<std::size_t>(pr.mult[i]));
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      CHECK(total(r, c) == (r == c ? rat(1) : rat(0)));
}

TEST_CASE("krein parameters satisfy the entrywise product identity") {
  auto pr = certify<Rational>(hamming(3, 2));
  const std::size_t n = pr.n();
  for (int i = 0; i <= pr.D; ++i) {
    for (int j = 0; j <= pr.D; ++j) {
      Matrix<Rational> lhs = schur(pr.E[i], pr.E[j]);
      Matrix<Rational> rhs(n, n);
      for (int h = 0; h <= pr.D; ++h) rhs = rhs + pr.E[h].scaled(pr.q[h][i][j]);
      rhs = rhs.scaled(rat(1, static_cast<long>(n)));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) CHECK(lhs(r, c) == rhs(r, c));
    }
  }
  // q^0_{ij} = delta_ij m_i
  for (int i = 0; i <= pr.D; ++i)
    for (int j = 0; j <= pr.D; ++j)
      CHECK(pr.q[0][i][j] == (i == j ? rat(pr.mult[i]) : rat(0)));
}

TEST_CASE("krein identity holds in float mode") {
  auto pr = certify<double>(johnson(6, 3));
  const std::size_t n = pr.n();
  double worst = 0.0;
  for (int i = 0; i <= pr.D; ++i)
    for (int j = 0; j <= pr.D; ++j) {
      Matrix<double> lhs = schur(pr.E[i], pr.E[j]);
      Matrix<double> rhs(n, n);
      for (int h = 0; h <= pr.D; ++h) rhs = rhs + pr.E[h].scaled(pr.q[h][i][j]);
      rhs = rhs.scaled(1.0 / static_cast<double>(n));
      worst = std::max(worst, (lhs - rhs).max_abs());
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("q-polynomial orderings match the brute-force search") {
  auto h32 = certify<Rational>(hamming(3, 2));
  CHECK(h32.orderings == brute_force_orderings(h32));
  CHECK(h32.orderings == std::vector<std::vector<int>>{{0, 1, 2, 3}});

  auto j63 = certify<Rational>(johnson(6, 3));
  CHECK(j63.orderings == brute_force_orderings(j63));
  REQUIRE(!j63.orderings.empty());
  CHECK(j63.orderings[0] == std::vector<int>{0, 1, 2, 3});

  auto h42 = certify<Rational>(hamming(4, 2));
  CHECK(h42.orderings == brute_force_orderings(h42));

  auto c6 = certify<Rational>(cycle(6));
  CHECK(c6.orderings == brute_force_orderings(c6));
}

TEST_CASE("cycle(7): irrational spectrum falls outside exact mode") {
  Graph c7 = cycle(7);
  CHECK_THROWS_AS(certify<Rational>(c7), error);
  try {
    certify<Rational>(c7);
  } catch (const error& e) {
    CHECK(e.kind() == errc::exact_mode_unsupported);
  }
  auto pr = certify<double>(c7);
  CHECK(pr.D == 3);
  CHECK(pr.theta[0] == doctest::Approx(2.0));
  // the cyclic scheme carries one ordering per multiplier class mod 7
  CHECK(pr.orderings == brute_force_orderings(pr));
  CHECK(pr.orderings.size() == 3);
  CHECK(pr.orderings[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("near-miss graph is rejected with a concrete witness") {
  // Petersen with one spoke of the outer cycle removed
  std::vector<std::pair<int, int>> edges = {
      {1, 2}, {2, 3}, {3, 4}, {0, 4},          // outer path (0-1 removed)
      {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},  // spokes
      {5, 7}, {7, 9}, {6, 9}, {6, 8}, {5, 8}}; // inner pentagram
  Graph g = make_graph(10, edges, "petersen minus an edge");
  try {
    certify<double>(g);
    FAIL("expected a distance-regularity failure");
  } catch (const not_drg_error& e) {
    CHECK(e.witness().h == 0);
    CHECK(e.witness().i == 1);
    CHECK(e.witness().j == 1);
    CHECK(e.witness().count1 != e.witness().count2);
    CHECK(e.kind() == errc::not_distance_regular);
  }
}

TEST_CASE("full petersen graph fails the diameter gate") {
  std::vector<std::pair<int, int>> edges = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
      {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},
      {5, 7}, {7, 9}, {6, 9}, {6, 8}, {5, 8}};
  Graph g = make_graph(10, edges, "petersen");
  try {
    certify<double>(g);
    FAIL("expected rejection");
  } catch (const error& e) {
    CHECK(e.kind() == errc::diameter_too_small);
  }
}

TEST_CASE("relabelled krein table follows the ordering") {
  auto pr = certify<Rational>(hamming(3, 2));
  auto qt = krein_parameters(pr, pr.orderings[0]);
  for (int h = 0; h <= pr.D; ++h)
    for (int i = 0; i <= pr.D; ++i)
      for (int j = 0; j <= pr.D; ++j) CHECK(qt[h][i][j] == pr.q[h][i][j]);
}

TEST_CASE("distance-profile representatives collapse for these families") {
  auto pr = certify<Rational>(hamming(3, 3));
  CHECK(representatives(pr.dist) == std::vector<int>{0});
  auto c6 = certify<Rational>(cycle(6));
  CHECK(representatives(c6.dist) == std::vector<int>{0});
}
