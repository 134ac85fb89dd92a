#include "tensorforge/secant.hpp"

#include <algorithm>
#include <random>

#include "tensorforge/linalg.hpp"

namespace tensorforge {

namespace {

std::vector<Rational> random_vec(std::int64_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-10, 10);
  while (true) {
    std::vector<Rational> v(m);
    bool nonzero = false;
    for (auto& x : v) {
      x = dist(rng);
      if (x != 0) nonzero = true;
    }
    if (nonzero) return v;
  }
}

// x (x) y (x) z as a dense vector of length m^3
std::vector<Rational> outer3(const std::vector<Rational>& x, const std::vector<Rational>& y,
                             const std::vector<Rational>& z) {
  const std::size_t m = x.size();
  std::vector<Rational> out(m * m * m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (y[j] == 0) continue;
      Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < m; ++k)
        if (z[k] != 0) out[(i * m + j) * m + k] = xy * z[k];
    }
  }
  return out;
}

std::vector<Rational> add_vecs(std::vector<Rational> a, const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<Rational> apply_mat(const MatrixQ& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.rows(), Rational(0));
  for (const auto& [ij, w] : m.entries()) out[ij.first] += w * v[ij.second];
  return out;
}

std::vector<Rational> unit_vec(std::int64_t m, std::int64_t i) {
  std::vector<Rational> v(m, Rational(0));
  v[i] = 1;
  return v;
}

// basis of the column space, echelon-reduced for determinism
std::vector<std::vector<Rational>> image_basis(const MatrixQ& m) {
  std::vector<std::vector<Rational>> out;
  EchelonBasis eb;
  MatrixQ mt = m.transpose();
  for (std::int64_t j = 0; j < mt.rows(); ++j) {
    auto col = mt.row_dense(j);
    if (eb.insert(col)) out.push_back(std::move(col));
  }
  return out;
}

// coordinate vectors extending `taken` to a basis of Q^m
std::vector<std::vector<Rational>> coordinate_complement(
    const std::vector<std::vector<Rational>>& taken, std::int64_t m) {
  EchelonBasis eb;
  for (const auto& v : taken) eb.insert(v);
  std::vector<std::vector<Rational>> out;
  for (std::int64_t i = 0; i < m; ++i) {
    auto e = unit_vec(m, i);
    if (eb.insert(e)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

SamplePoint SamplePoint::random(std::int64_t m, std::int64_t r, std::uint64_t seed) {
  if (m < 1 || r < 1) throw DomainError("need m, r >= 1");
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dull);
  SamplePoint p;
  p.m = m;
  p.r = r;
  for (std::int64_t a = 0; a < r; ++a) {
    p.x.push_back(random_vec(m, rng));
    p.y.push_back(random_vec(m, rng));
    p.z.push_back(random_vec(m, rng));
    p.xi.push_back(random_vec(m, rng));
    p.eta.push_back(random_vec(m, rng));
    p.tau.push_back(random_vec(m, rng));
  }
  return p;
}

SubspaceProfile SubspaceProfile::from_matrices(const MatrixQ& a, const MatrixQ& b,
                                               const MatrixQ& c) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != c.cols() ||
      a.rows() != b.rows() || b.rows() != c.rows())
    throw DomainError("profile matrices must be square of equal size");
  const std::int64_t m = a.rows();
  SubspaceProfile out;
  out.psi_a = a;
  out.psi_b = b;
  out.psi_c = c;
  out.delta_a = rat(matrix_rank(a), m);
  out.delta_b = rat(matrix_rank(b), m);
  out.delta_c = rat(matrix_rank(c), m);
  const Rational &dA = out.delta_a, &dB = out.delta_b, &dC = out.delta_c;
  out.delta_combined = 1 - dA * dB - dA * dC - dB * dC + 2 * dA * dB * dC;
  out.comp_a = coordinate_complement(image_basis(a), m);
  out.comp_b = coordinate_complement(image_basis(b), m);
  out.comp_c = coordinate_complement(image_basis(c), m);
  return out;
}

SubspaceProfile SubspaceProfile::random(std::int64_t m, std::int64_t rank_a, std::int64_t rank_b,
                                        std::int64_t rank_c, std::uint64_t seed) {
  if (rank_a < 0 || rank_a > m || rank_b < 0 || rank_b > m || rank_c < 0 || rank_c > m)
    throw DomainError("profile ranks must lie in [0, m]");
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dull);
  std::uniform_int_distribution<int> dist(-5, 5);
  auto make = [&](std::int64_t rank) {
    MatrixQ out(m, m);
    if (rank == 0) return out;
    while (true) {
      out = MatrixQ(m, m);
      std::vector<std::vector<int>> L(m, std::vector<int>(rank)), R(rank, std::vector<int>(m));
      for (auto& row : L)
        for (auto& v : row) v = dist(rng);
      for (auto& row : R)
        for (auto& v : row) v = dist(rng);
      for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j) {
          long s = 0;
          for (std::int64_t t = 0; t < rank; ++t) s += long(L[i][t]) * R[t][j];
          if (s) out.set(i, j, s);
        }
      if (matrix_rank(out) == rank) return out;
    }
  };
  return from_matrices(make(rank_a), make(rank_b), make(rank_c));
}

SecantDim secant_dim_formula(std::int64_t m, std::int64_t r) {
  if (m < 1 || r < 1) throw DomainError("need m, r >= 1");
  return {std::min(r * (3 * m - 2), m * m * m), m < 4};
}

std::int64_t terracini_dimension(std::int64_t m, std::int64_t r, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("need trials >= 1");
  std::int64_t best = 0;
  for (int t = 0; t < trials; ++t) {
    SamplePoint p = SamplePoint::random(m, r, seed + 1000003ull * static_cast<std::uint64_t>(t));
    std::vector<std::vector<Rational>> gens;
    gens.reserve(3 * r * m);
    for (std::int64_t a = 0; a < r; ++a)
      for (std::int64_t i = 0; i < m; ++i) {
        auto e = unit_vec(m, i);
        gens.push_back(outer3(e, p.y[a], p.z[a]));
        gens.push_back(outer3(p.x[a], e, p.z[a]));
        gens.push_back(outer3(p.x[a], p.y[a], e));
      }
    best = std::max(best, dense_rank(std::move(gens)));
  }
  return best;
}

Tensor3 modified_tensor(const SamplePoint& p, const SubspaceProfile& profile, int side) {
  if (side != 1 && side != 2) throw DomainError("side must be 1 or 2");
  if (profile.psi_a.rows() != p.m) throw DomainError("profile size does not match sample");
  Tensor3 out(p.m, p.m, p.m);
  for (std::int64_t a = 0; a < p.r; ++a) {
    const auto &x = side == 1 ? p.x[a] : p.xi[a], &y = side == 1 ? p.y[a] : p.eta[a],
               &z = side == 1 ? p.z[a] : p.tau[a];
    const auto &u = side == 1 ? p.xi[a] : p.x[a], &v = side == 1 ? p.eta[a] : p.y[a],
               &w = side == 1 ? p.tau[a] : p.z[a];
    auto xs = apply_mat(profile.psi_a, u);
    auto ys = apply_mat(profile.psi_b, v);
    auto zs = apply_mat(profile.psi_c, w);
    auto term = [&](const std::vector<Rational>& t1, const std::vector<Rational>& t2,
                    const std::vector<Rational>& t3) {
      for (std::int64_t i = 0; i < p.m; ++i) {
        if (t1[i] == 0) continue;
        for (std::int64_t j = 0; j < p.m; ++j) {
          if (t2[j] == 0) continue;
          Rational f = t1[i] * t2[j];
          for (std::int64_t k = 0; k < p.m; ++k)
            if (t3[k] != 0) out.add(i, j, k, f * t3[k]);
        }
      }
    };
    term(x, y, z);
    term(xs, y, z);
    term(x, ys, z);
    term(x, y, zs);
  }
  return out;
}

TangentSpaces build_tangent_spaces(const SamplePoint& p, const SubspaceProfile& profile) {
  TangentSpaces out;
  auto im_a = image_basis(profile.psi_a), im_b = image_basis(profile.psi_b),
       im_c = image_basis(profile.psi_c);
  for (std::int64_t a = 0; a < p.r; ++a) {
    for (const auto& v : im_a) out.p_gens.push_back(outer3(v, p.y[a], p.z[a]));
    for (const auto& v : im_b) out.p_gens.push_back(outer3(p.x[a], v, p.z[a]));
    for (const auto& v : im_c) out.p_gens.push_back(outer3(p.x[a], p.y[a], v));
  }
  for (std::int64_t a = 0; a < p.r; ++a) {
    auto bx = apply_mat(profile.psi_a, p.xi[a]);
    auto by = apply_mat(profile.psi_b, p.eta[a]);
    auto bz = apply_mat(profile.psi_c, p.tau[a]);
    auto ys = add_vecs(p.y[a], by), zs = add_vecs(p.z[a], bz), xs = add_vecs(p.x[a], bx);
    for (std::int64_t i = 0; i < p.m; ++i) {
      auto e = unit_vec(p.m, i);
      out.q_gens.push_back(add_vecs(add_vecs(outer3(e, p.y[a], p.z[a]), outer3(e, by, p.z[a])),
                                    outer3(e, p.y[a], bz)));
      out.q_gens.push_back(add_vecs(add_vecs(outer3(p.x[a], e, p.z[a]), outer3(bx, e, p.z[a])),
                                    outer3(p.x[a], e, bz)));
      out.q_gens.push_back(add_vecs(add_vecs(outer3(p.x[a], p.y[a], e), outer3(bx, p.y[a], e)),
                                    outer3(p.x[a], by, e)));
      out.qprime_gens.push_back(outer3(e, ys, zs));
      out.qprime_gens.push_back(outer3(xs, e, zs));
      out.qprime_gens.push_back(outer3(xs, ys, e));
    }
  }
  return out;
}

PBoundReport check_P_lower_bound(const SamplePoint& p, const SubspaceProfile& profile,
                                 std::int64_t r) {
  TangentSpaces ts = build_tangent_spaces(p, profile);
  std::int64_t dim_p = span_dim(ts.p_gens);
  Rational m3(Integer(static_cast<long>(p.m)) * p.m * p.m);
  Rational bound = m3 - Rational(p.m) * Rational(r) *
                            (3 - profile.delta_a - profile.delta_b - profile.delta_c);
  return {dim_p, bound, Rational(dim_p) >= bound};
}

PQReport check_PQ_report(const SamplePoint& p, const SubspaceProfile& profile, std::int64_t k,
                         const Rational& eps, const Rational& mu) {
  TangentSpaces ts = build_tangent_spaces(p, profile);
  std::vector<std::vector<Rational>> all = ts.p_gens;
  for (auto& g : ts.q_gens) all.push_back(std::move(g));
  std::int64_t dim_pq = span_dim(all);
  Rational m2(Integer(static_cast<long>(p.m)) * p.m);
  Rational rhs = m2 * (Rational(p.m) * mu - std::max(Rational(3 * k), Rational(Rational(p.m) * eps)));
  return {dim_pq, rhs, Rational(dim_pq) >= rhs};
}

ImageBoundReport check_image_bound(const SamplePoint& p, const SubspaceProfile& profile) {
  TangentSpaces ts = build_tangent_spaces(p, profile);
  std::int64_t dim = span_dim(ts.p_gens);
  Rational cap = (profile.delta_a + profile.delta_b + profile.delta_c) * Rational(p.m) *
                 Rational(p.r);
  return {dim, cap, Rational(dim) <= cap};
}

Tensor3 assemble_W(const SamplePoint& p) {
  Tensor3 out(2 * p.m, 2 * p.m, 2 * p.m);
  for (std::int64_t a = 0; a < p.r; ++a) {
    std::vector<Rational> u(2 * p.m), v(2 * p.m), w(2 * p.m);
    for (std::int64_t i = 0; i < p.m; ++i) {
      u[i] = p.x[a][i];
      u[p.m + i] = p.xi[a][i];
      v[i] = p.y[a][i];
      v[p.m + i] = p.eta[a][i];
      w[i] = p.z[a][i];
      w[p.m + i] = p.tau[a][i];
    }
    for (std::int64_t i = 0; i < 2 * p.m; ++i) {
      if (u[i] == 0) continue;
      for (std::int64_t j = 0; j < 2 * p.m; ++j) {
        if (v[j] == 0) continue;
        Rational f = u[i] * v[j];
        for (std::int64_t k = 0; k < 2 * p.m; ++k)
          if (w[k] != 0) out.add(i, j, k, f * w[k]);
      }
    }
  }
  return out;
}

namespace {

// subspace helpers for the R' construction
using Basis = std::vector<std::vector<Rational>>;

Basis apply_to_basis(const std::vector<std::vector<Rational>>& proj, const Basis& basis) {
  Basis out;
  for (const auto& v : basis) {
    std::vector<Rational> w(proj.size(), Rational(0));
    for (std::size_t i = 0; i < proj.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += proj[i][j] * v[j];
    out.push_back(std::move(w));
  }
  return out;
}

// complement of (basis ∩ ker proj) inside span(basis): keep the basis vectors
// whose images stay independent
Basis kernel_complement(const std::vector<std::vector<Rational>>& proj, const Basis& basis) {
  Basis out;
  EchelonBasis eb;
  for (const auto& v : basis) {
    std::vector<Rational> w(proj.size(), Rational(0));
    for (std::size_t i = 0; i < proj.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += proj[i][j] * v[j];
    if (eb.insert(w)) out.push_back(v);
  }
  return out;
}

std::int64_t triple_products_dim(const std::vector<std::array<const Basis*, 3>>& blocks,
                                 std::int64_t m) {
  Basis all;
  for (const auto& blk : blocks)
    for (const auto& u : *blk[0])
      for (const auto& v : *blk[1])
        for (const auto& w : *blk[2]) all.push_back(outer3(u, v, w));
  (void)m;
  return span_dim(all);
}

}  // namespace

RLReport check_RL_decomposition(const SubspaceProfile& profile, std::int64_t k) {
  const std::int64_t m = profile.psi_a.rows();
  if (k < 1 || k > m - 1) throw DomainError("need 1 <= k <= m-1");
  RLReport rep{};

  Basis im[3] = {image_basis(profile.psi_a), image_basis(profile.psi_b),
                 image_basis(profile.psi_c)};
  Basis comp[3] = {profile.comp_a, profile.comp_b, profile.comp_c};

  // eight blocks: im/comp choice per mode; disjoint and exhaustive
  std::int64_t total = 0;
  std::vector<std::array<const Basis*, 3>> all_blocks;
  for (int mask = 0; mask < 8; ++mask) {
    std::array<const Basis*, 3> blk{};
    std::int64_t prod = 1;
    for (int i = 0; i < 3; ++i) {
      blk[i] = (mask >> i) & 1 ? &im[i] : &comp[i];
      prod *= static_cast<std::int64_t>(blk[i]->size());
    }
    total += prod;
    all_blocks.push_back(blk);
  }
  rep.blocks_disjoint_exhaustive =
      total == m * m * m && triple_products_dim(all_blocks, m) == m * m * m;

  // R = (im,comp,comp) + (comp,im,comp) + (comp,comp,im) + (comp,comp,comp)
  std::vector<std::array<const Basis*, 3>> r_blocks = {
      {&im[0], &comp[1], &comp[2]},
      {&comp[0], &im[1], &comp[2]},
      {&comp[0], &comp[1], &im[2]},
      {&comp[0], &comp[1], &comp[2]},
  };
  rep.dim_r = triple_products_dim(r_blocks, m);
  Rational m3(Integer(static_cast<long>(m)) * m * m);
  rep.dim_r_formula = m3 * profile.delta_combined;

  // general projections pi_I: Q^m -> Q^{m-k}; deterministic retry over seeds
  // until the image dimensions are maximal
  auto general_projection = [&](const Basis& image, const Basis& complement, std::uint64_t seed,
                                Basis& c_prime, Basis& z_prime) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-7, 7);
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<std::vector<Rational>> proj(m - k, std::vector<Rational>(m));
      for (auto& row : proj)
        for (auto& v : row) v = dist(rng);
      Basis cp = kernel_complement(proj, complement);
      if (static_cast<std::int64_t>(cp.size()) !=
          std::min<std::int64_t>(static_cast<std::int64_t>(complement.size()), m - k))
        continue;
      Basis z = kernel_complement(proj, image);
      if (static_cast<std::int64_t>(z.size()) !=
          std::min<std::int64_t>(static_cast<std::int64_t>(image.size()), m - k))
        continue;
      // Z' : image vectors extending pi(C) to all of Q^{m-k}
      EchelonBasis eb;
      for (auto& w : apply_to_basis(proj, cp)) eb.insert(std::move(w));
      Basis zp;
      for (const auto& zv : z) {
        std::vector<Rational> w(m - k, Rational(0));
        for (std::int64_t i = 0; i < m - k; ++i)
          for (std::int64_t j = 0; j < m; ++j) w[i] += proj[i][j] * zv[j];
        if (eb.insert(w)) zp.push_back(zv);
      }
      if (eb.dim() != m - k) continue;  // pi not surjective on C' + Z'
      c_prime = std::move(cp);
      z_prime = std::move(zp);
      return;
    }
    throw DomainError("failed to draw a general projection");
  };

  Basis cp[3], zp[3];
  for (int i = 0; i < 3; ++i)
    general_projection(im[i], comp[i], 0xabcdef12u + 977u * static_cast<std::uint64_t>(i) +
                                           static_cast<std::uint64_t>(k),
                       cp[i], zp[i]);

  std::vector<std::array<const Basis*, 3>> rp_blocks = {
      {&zp[0], &cp[1], &cp[2]},
      {&cp[0], &zp[1], &cp[2]},
      {&cp[0], &cp[1], &zp[2]},
      {&cp[0], &cp[1], &cp[2]},
  };
  rep.dim_r_prime = triple_products_dim(rp_blocks, m);

  // case analysis by how many complements are truncated (dim C < m-k)
  auto cd = [&](int i) { return static_cast<std::int64_t>(comp[i].size()); };
  auto zpd = [&](int i) { return static_cast<std::int64_t>(zp[i].size()); };
  int small = 0;
  for (int i = 0; i < 3; ++i)
    if (cd(i) < m - k) ++small;
  rep.case_id = small + 1;
  switch (small) {
    case 0:
    case 1:
      rep.dim_r_prime_formula = (m - k) * (m - k) * (m - k);
      break;
    case 2: {
      // the two truncated modes keep their full complements
      std::vector<int> sm, big;
      for (int i = 0; i < 3; ++i) (cd(i) < m - k ? sm : big).push_back(i);
      rep.dim_r_prime_formula =
          (m - k) * (zpd(sm[0]) * cd(sm[1]) + cd(sm[0]) * zpd(sm[1]) + cd(sm[0]) * cd(sm[1]));
      break;
    }
    default:
      rep.dim_r_prime_formula = zpd(0) * cd(1) * cd(2) + cd(0) * zpd(1) * cd(2) +
                                cd(0) * cd(1) * zpd(2) + cd(0) * cd(1) * cd(2);
      break;
  }
  rep.lower_bound = m3 * profile.delta_combined - Rational(3 * k) * Rational(m) * Rational(m);
  rep.holds = rep.blocks_disjoint_exhaustive && Rational(rep.dim_r) == rep.dim_r_formula &&
              rep.dim_r_prime == rep.dim_r_prime_formula &&
              Rational(rep.dim_r_prime) >= rep.lower_bound;
  return rep;
}

}  // namespace tensorforge
