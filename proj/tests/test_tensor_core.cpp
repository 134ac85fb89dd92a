#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tensorforge/linalg.hpp"
#include "tensorforge/tensor3.hpp"

using namespace tensorforge;

namespace {

// the 3x4x4 tensor of the worked support example: one A-slice carrying a
// rank-3 pattern in B and C
Tensor3 support_example() {
  Tensor3 t(3, 4, 4);
  t.set(0, 0, 0, 1);
  t.set(0, 1, 0, 2);
  t.set(0, 2, 0, 2);
  t.set(0, 0, 1, 1);
  t.set(0, 1, 1, 2);
  t.set(0, 0, 2, 1);
  return t;
}

Tensor3 random_tensor(std::int64_t a, std::int64_t b, std::int64_t c, double density,
                      std::mt19937_64& rng) {
  Tensor3 t(a, b, c);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> val(-9, 9);
  for (std::int64_t i = 0; i < a; ++i)
    for (std::int64_t j = 0; j < b; ++j)
      for (std::int64_t k = 0; k < c; ++k)
        if (u(rng) < density) t.set(i, j, k, val(rng));
  return t;
}

}  // namespace

TEST_CASE("flatten: diagonal, support example, zero") {
  Tensor3 d3 = Tensor3::diagonal(3);
  MatrixQ fa = flatten(d3, Mode::A);
  CHECK(fa.rows() == 3);
  CHECK(fa.cols() == 9);
  for (std::int64_t i = 0; i < 3; ++i) CHECK(fa.at(i, i * 3 + i) == 1);
  CHECK(fa.nnz() == 3);

  MatrixQ fs = flatten(support_example(), Mode::A);
  CHECK(fs.rows() == 3);
  CHECK(fs.cols() == 16);
  for (std::int64_t j = 0; j < 16; ++j) {
    CHECK(fs.at(1, j) == 0);
    CHECK(fs.at(2, j) == 0);
  }

  CHECK(flatten(Tensor3::zero(2, 3, 4), Mode::B).is_zero());
}

TEST_CASE("matrix_rank: identity, all-ones, matmul flattening") {
  CHECK(matrix_rank(MatrixQ::identity(4)) == 4);
  CHECK(matrix_rank(MatrixQ::all_ones(5, 5)) == 1);
  CHECK(matrix_rank(flatten(matmul_tensor(2, 2, 2), Mode::A)) == 4);
}

TEST_CASE("flattening_ranks and conciseness") {
  auto fr = flattening_ranks(Tensor3::diagonal(3));
  CHECK(fr.rank_a == 3);
  CHECK(fr.rank_b == 3);
  CHECK(fr.rank_c == 3);
  CHECK(fr.concise());

  auto fs = flattening_ranks(support_example());
  CHECK(fs.rank_a == 1);
  CHECK(fs.rank_b == 3);
  CHECK(fs.rank_c == 3);
  CHECK_FALSE(fs.concise_a);

  Tensor3 e(2, 2, 2);
  e.set(0, 0, 0, 1);
  auto fe = flattening_ranks(e);
  CHECK(fe.rank_a == 1);
  CHECK(fe.rank_b == 1);
  CHECK(fe.rank_c == 1);
}

TEST_CASE("support") {
  Tensor3 s = support(support_example());
  CHECK(s.dims() == Index3{1, 3, 3});
  CHECK(flattening_ranks(s).concise());

  Tensor3 d2 = Tensor3::diagonal(2);
  CHECK(support(d2) == d2);

  Tensor3 e(3, 3, 3);
  e.set(2, 2, 2, 1);
  Tensor3 se = support(e);
  CHECK(se.dims() == Index3{1, 1, 1});
  CHECK(se.at(0, 0, 0) == 1);

  CHECK_THROWS_AS(support(Tensor3::zero(2, 2, 2)), DomainError);
}

TEST_CASE("support preserves flattening ranks on random tensors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor3 t = random_tensor(3, 4, 2, 0.25, rng);
    if (t.is_zero()) continue;
    Tensor3 s = support(t);
    auto ft = flattening_ranks(t);
    auto fs = flattening_ranks(s);
    CHECK(fs.rank_a == ft.rank_a);
    CHECK(fs.rank_b == ft.rank_b);
    CHECK(fs.rank_c == ft.rank_c);
    CHECK(fs.concise());
  }
}

TEST_CASE("direct_sum") {
  Tensor3 s = direct_sum(Tensor3::diagonal(2), Tensor3::diagonal(3));
  CHECK(s == Tensor3::diagonal(5));

  Tensor3 t = support_example();
  Tensor3 padded = direct_sum(t, Tensor3::zero(1, 1, 1));
  CHECK(padded.dims() == Index3{4, 5, 5});
  CHECK(padded.nnz() == t.nnz());

  auto fr = flattening_ranks(direct_sum(Tensor3::diagonal(2), Tensor3::diagonal(4)));
  CHECK(fr.rank_a == 6);
  CHECK(fr.rank_b == 6);
  CHECK(fr.rank_c == 6);
}

TEST_CASE("kronecker") {
  Tensor3 t = support_example();
  Tensor3 unit(1, 1, 1);
  unit.set(0, 0, 0, 1);
  CHECK(kronecker(t, unit) == t);

  // e1 (x) e2 (x) e1 in 2x2x2, cloned by all-ones(3,3,3): 27 unit entries
  Tensor3 e(2, 2, 2);
  e.set(0, 1, 0, 1);
  Tensor3 c = kronecker(e, Tensor3::all_ones(3, 3, 3));
  CHECK(c.dims() == Index3{6, 6, 6});
  CHECK(c.nnz() == 27);
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t j = 0; j < 3; ++j)
      for (std::int64_t k = 0; k < 3; ++k) CHECK(c.at(i, 3 + j, k) == 1);

  Tensor3 dd = kronecker(Tensor3::diagonal(2), Tensor3::diagonal(2));
  CHECK(dd.nnz() == 4);
  for (const auto& [idx, v] : dd.entries()) {
    CHECK(idx[0] == idx[1]);
    CHECK(idx[1] == idx[2]);
    CHECK(v == 1);
  }
}

TEST_CASE("kronecker with rank-one factor preserves flattening ranks") {
  std::mt19937_64 rng(5);
  Tensor3 t = random_tensor(3, 3, 3, 0.5, rng);
  Tensor3 one(2, 2, 2);
  for (std::int64_t i = 0; i < 2; ++i)
    for (std::int64_t j = 0; j < 2; ++j)
      for (std::int64_t k = 0; k < 2; ++k) one.set(i, j, k, 1);
  auto ft = flattening_ranks(t);
  auto fk = flattening_ranks(kronecker(t, one));
  CHECK(ft.rank_a == fk.rank_a);
  CHECK(ft.rank_b == fk.rank_b);
  CHECK(ft.rank_c == fk.rank_c);
}

TEST_CASE("restrict") {
  Tensor3 r = restrict_tensor(Tensor3::diagonal(3), {0}, {0}, {0});
  CHECK(r.dims() == Index3{1, 1, 1});
  CHECK(r.at(0, 0, 0) == 1);

  Tensor3 t1 = Tensor3::diagonal(2), t2 = support_example();
  Tensor3 s = direct_sum(t1, t2);
  Tensor3 back = restrict_tensor(s, {0, 1}, {0, 1}, {0, 1});
  CHECK(back == t1);
  Tensor3 back2 = restrict_tensor(s, {2, 3, 4}, {2, 3, 4, 5}, {2, 3, 4, 5});
  CHECK(back2 == t2);

  CHECK_THROWS_AS(restrict_tensor(t1, {0, 5}, {0}, {0}), DomainError);
  CHECK_THROWS_AS(restrict_tensor(t1, {0, 0}, {0}, {0}), DomainError);
}

TEST_CASE("trivial_rank_bounds") {
  auto [lo4, hi4] = trivial_rank_bounds(Tensor3::diagonal(4));
  CHECK(lo4 == 4);
  CHECK(hi4 == 16);

  auto [lom, him] = trivial_rank_bounds(matmul_tensor(2, 2, 2));
  CHECK(lom == 4);
  CHECK(him == 16);

  Tensor3 r1 = Tensor3::rank_one({1, 2}, {1, 1}, {3, 5});
  auto [lo1, hi1] = trivial_rank_bounds(r1);
  CHECK(lo1 == 1);
  CHECK(hi1 == 1);
}

TEST_CASE("matmul_tensor") {
  Tensor3 unit = matmul_tensor(1, 1, 1);
  CHECK(unit.dims() == Index3{1, 1, 1});
  CHECK(unit.at(0, 0, 0) == 1);

  Tensor3 m222 = matmul_tensor(2, 2, 2);
  CHECK(m222.dims() == Index3{4, 4, 4});
  CHECK(m222.nnz() == 8);
  for (const auto& [idx, v] : m222.entries()) CHECK(v == 1);

  Tensor3 m121 = matmul_tensor(1, 2, 1);
  CHECK(m121.dims() == Index3{2, 2, 1});
  CHECK(m121.nnz() == 2);
}

TEST_CASE("flattening ranks are invariant under index permutations") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    Tensor3 t = random_tensor(3, 4, 3, 0.4, rng);
    std::vector<std::int64_t> pa{0, 1, 2}, pb{0, 1, 2, 3}, pc{0, 1, 2};
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pb.begin(), pb.end(), rng);
    std::shuffle(pc.begin(), pc.end(), rng);
    Tensor3 q(3, 4, 3);
    for (const auto& [idx, v] : t.entries()) q.set(pa[idx[0]], pb[idx[1]], pc[idx[2]], v);
    auto ft = flattening_ranks(t);
    auto fq = flattening_ranks(q);
    CHECK(ft.rank_a == fq.rank_a);
    CHECK(ft.rank_b == fq.rank_b);
    CHECK(ft.rank_c == fq.rank_c);
  }
}

TEST_CASE("decomposition expand/certify") {
  Decomposition d{{2, 2, 2}, {{{1, 0}, {1, 0}, {1, 0}}, {{0, 1}, {0, 1}, {0, 1}}}};
  CHECK(d.certifies(Tensor3::diagonal(2)));
  CHECK_FALSE(d.certifies(Tensor3::all_ones(2, 2, 2)));
}

TEST_CASE("trivial lower bound never exceeds a planted decomposition size") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    Decomposition d{{3, 3, 3}, {}};
    int s = 1 + trial % 5;
    for (int i = 0; i < s; ++i) {
      RankOneTerm term;
      for (int j = 0; j < 3; ++j) {
        term.x.push_back(val(rng));
        term.y.push_back(val(rng));
        term.z.push_back(val(rng));
      }
      d.terms.push_back(term);
    }
    Tensor3 t = d.expand();
    if (t.is_zero()) continue;
    auto [lo, hi] = trivial_rank_bounds(t);
    CHECK(lo <= s);
    CHECK(lo <= hi);
  }
}

TEST_CASE("dense_rank on a known defective case") {
  // Bareiss must rescale rows with zero pivot entries as well
  std::vector<std::vector<Rational>> rows = {
      {1, 2, 0, 0}, {0, 0, 1, 1}, {2, 4, 1, 1}, {1, 2, 1, 1}};
  CHECK(dense_rank(rows) == 2);
}

TEST_CASE("dense_rank handles fractional entries") {
  // Hilbert 4x4 has full rank despite tiny pivots
  std::vector<std::vector<Rational>> hilbert;
  for (int i = 0; i < 4; ++i) {
    std::vector<Rational> row;
    for (int j = 0; j < 4; ++j) row.push_back(rat(1, i + j + 1));
    hilbert.push_back(std::move(row));
  }
  CHECK(dense_rank(hilbert) == 4);

  // planted rank-2 fractional matrix
  std::vector<std::vector<Rational>> low;
  std::vector<Rational> u = {rat(1, 2), rat(-2, 3), rat(5)};
  std::vector<Rational> v = {rat(3, 7), rat(1), rat(-1, 4)};
  for (int i = 0; i < 4; ++i) {
    std::vector<Rational> row(3);
    for (int j = 0; j < 3; ++j) row[j] = rat(i + 1) * u[j] + rat(2 * i - 3) * v[j];
    low.push_back(std::move(row));
  }
  CHECK(dense_rank(low) == 2);
}

TEST_CASE("Bareiss and echelon ranks agree on random rational matrices") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 2 + trial % 5, cols = 2 + (trial / 5) % 5;
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols));
    for (auto& row : m)
      for (auto& x : row) x = rng() % 3 ? rat(num(rng), den(rng)) : Rational(0);
    CHECK(dense_rank(m) == span_dim(m));
  }
}
