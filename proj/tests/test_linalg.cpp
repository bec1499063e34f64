#include <catch_amalgamated.hpp>

#include "corner/linalg.hpp"
#include "corner/random.hpp"

using namespace corner;

namespace {

// Leibniz expansion: independent of the elimination in det().
Q leibniz(const Mat& m) {
  std::size_t n = m.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Q total = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    Q term = inv % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][p[i]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

Mat random_mat(Rng& rng, std::size_t r, std::size_t c) {
  Mat m(r, Vec(c));
  for (auto& row : m)
    for (auto& x : row) x = rng.rational(-3, 3, 2);
  return m;
}

}  // namespace

TEST_CASE("rational literals parse exactly and reject zero denominators") {
  CHECK(parse_rational("3/6") == Q(1, 2));
  CHECK(parse_rational("-7") == Q(-7));
  CHECK(parse_rational("+4/2") == Q(2));
  CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
  CHECK_THROWS_AS(parse_rational("1.5"), SchemaError);
  CHECK_THROWS_AS(parse_rational(""), SchemaError);
  CHECK_THROWS_AS(parse_rational("1/-2"), SchemaError);
}

TEST_CASE("floor and ceil agree with the integer part on both signs") {
  CHECK(floor_z(Q(-7, 2)) == -4);
  CHECK(floor_z(Q(7, 2)) == 3);
  CHECK(ceil_z(Q(-7, 2)) == -3);
  CHECK(floor_z(Q(-4)) == -4);
}

TEST_CASE("determinant matches the Leibniz expansion") {
  Rng rng(1);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = std::size_t(rng.uniform(1, 4));
    Mat m = random_mat(rng, n, n);
    CHECK(det(m) == leibniz(m));
  }
}

TEST_CASE("inverse times matrix is the identity; singular matrices have none") {
  Rng rng(2);
  for (int it = 0; it < 30; ++it) {
    std::size_t n = std::size_t(rng.uniform(1, 4));
    Mat m = random_mat(rng, n, n);
    auto inv = inverse(m);
    REQUIRE(inv.has_value() == (leibniz(m) != 0));
    if (inv) CHECK(mat_mul(*inv, m, n, n) == identity_mat(n));
  }
  CHECK_FALSE(inverse(Mat{{1, 2}, {2, 4}}).has_value());
}

TEST_CASE("rank plus nullity equals the column count") {
  Rng rng(3);
  for (int it = 0; it < 40; ++it) {
    std::size_t r = std::size_t(rng.uniform(1, 4)), c = std::size_t(rng.uniform(1, 5));
    Mat m = random_mat(rng, r, c);
    if (rng.coin() && r > 1) m[r - 1] = vadd(m[0], m[r - 2]);  // force dependence sometimes
    Mat K = nullspace(m, c);
    CHECK(rank(m, c) + int(K.size()) == int(c));
    for (auto& k : K) CHECK(mat_vec(m, k) == zero_vec(r));
  }
}

TEST_CASE("Smith invariant factors of hand-computed matrices") {
  // diag(2, 3) ~ diag(1, 6)
  auto f = smith(ZMat{{2, 0}, {0, 3}}, 2, 2).factors();
  REQUIRE(f.size() == 2);
  CHECK(f[0] == 1);
  CHECK(f[1] == 6);
  // [[2,4,4],[-6,6,12],[10,-4,-16]] has invariant factors 2, 6, 12
  auto g = smith(ZMat{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3, 3).factors();
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 2);
  CHECK(g[1] == 6);
  CHECK(g[2] == 12);
  // the relation row (1, 1) presents Z^2 / (1,1) = Z
  auto h = smith(ZMat{{1, 1}}, 1, 2).factors();
  REQUIRE(h.size() == 1);
  CHECK(h[0] == 1);
}

TEST_CASE("product of Smith factors is |det| and each divides the next") {
  Rng rng(4);
  for (int it = 0; it < 30; ++it) {
    std::size_t n = std::size_t(rng.uniform(1, 4));
    ZMat m(n, ZVec(n));
    for (auto& row : m)
      for (auto& x : row) x = rng.uniform(-4, 4);
    Q d = leibniz(to_q(m));
    auto f = smith(m, n, n).factors();
    if (d == 0) {
      CHECK(f.size() < n);
      continue;
    }
    REQUIRE(f.size() == n);
    Z prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      prod *= f[i];
      if (i) CHECK(f[i] % f[i - 1] == 0);
    }
    CHECK(Q(prod) == abs(d));
  }
}
