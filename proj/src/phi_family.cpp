#include "tensorforge/phi_family.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tensorforge {

namespace {

u64 pow_u64_checked(u64 base, u64 exp, const char* what) {
  u64 out = 1;
  for (u64 i = 0; i < exp; ++i) {
    if (base != 0 && out > UINT64_MAX / base) throw DomainError(std::string(what) + " overflows");
    out *= base;
  }
  return out;
}

std::string phi_key(const PhiFunction& phi) {
  std::ostringstream os;
  os << "phi:";
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    if (i) os << ',';
    os << phi.values[i];
  }
  return os.str();
}

std::string unit_key(const UnitPos& u) {
  std::ostringstream os;
  os << "unit:" << u.i << ',' << u.alpha << ',' << u.j << ',' << u.beta;
  return os.str();
}

}  // namespace

PhiParams::PhiParams(u64 r_, u64 theta_, u64 sigma_, std::vector<std::vector<int>> pi_)
    : r(r_), theta(theta_), sigma(sigma_), pi(std::move(pi_)) {
  validate();
}

PhiParams PhiParams::with_default_pi(u64 r, u64 theta, u64 sigma) {
  if (theta >= 63) throw DomainError("theta too large");
  if (r > (u64{1} << theta)) throw DomainError("need 2^theta >= r for distinct pi functions");
  std::vector<std::vector<int>> pi(r, std::vector<int>(theta, 1));
  for (u64 n = 0; n < r; ++n)
    for (u64 g = 0; g < theta; ++g)
      pi[n][g] = 1 + static_cast<int>((n >> (theta - 1 - g)) & 1);
  return PhiParams(r, theta, sigma, std::move(pi));
}

void PhiParams::validate() const {
  if (r < 1) throw DomainError("r must be >= 1");
  if (sigma < 1) throw DomainError("sigma must be >= 1");
  if (theta >= 63) throw DomainError("theta too large");
  if (r > (u64{1} << theta)) throw DomainError("need 2^theta >= r for distinct pi functions");
  if (pi.size() != r) throw DomainError("need exactly r pi functions");
  for (const auto& f : pi) {
    if (f.size() != theta) throw DomainError("pi function must have theta values");
    for (int v : f)
      if (v != 1 && v != 2) throw DomainError("pi values must be 1 or 2");
  }
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t j = i + 1; j < pi.size(); ++j)
      if (pi[i] == pi[j]) throw DomainError("pi functions must be pairwise distinct");
}

u64 PhiParams::side_len() const { return pow_u64_checked(sigma, theta, "sigma^theta"); }

Integer PhiParams::family_size() const {
  Integer s2 = Integer(static_cast<unsigned long>(sigma)) * Integer(static_cast<unsigned long>(sigma));
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), s2.get_mpz_t(), static_cast<unsigned long>(theta));
  return out;
}

Rational FactoredMatrix::entry(u64 row, u64 col) const {
  auto l = left.find(row);
  if (l == left.end()) return 0;
  auto r = right.find(col);
  if (r == right.end()) return 0;
  return l->second * r->second;
}

DerivedParams derive_parameters(u64 a, u64 b, u64 c, u64 r) {
  if (a < 1 || b < 1 || c < 1 || r < 1) throw DomainError("dims and r must be >= 1");
  u64 rho = 2 * a * b * c + 1;
  u64 theta = 0;
  while ((u64{1} << theta) < r) ++theta;  // ceil(log2 r), 0 at r = 1
  if (rho > UINT64_MAX / rho) throw DomainError("rho^2 overflows");
  u64 rho2 = rho * rho;
  if (2 * rho2 > UINT64_MAX / r) throw DomainError("sigma overflows");
  u64 sigma = 2 * rho2 * r;
  return {rho, theta, sigma, theta == 0};
}

std::pair<u64, u64> digits(u64 s, u64 sigma) {
  if (sigma < 1) throw DomainError("sigma must be >= 1");
  if (sigma > UINT64_MAX / sigma || s >= sigma * sigma)
    throw DomainError("digit argument out of range");
  return {s / sigma + 1, s % sigma + 1};
}

FactoredMatrix phi_tensor(const PhiParams& params, const PhiFunction& phi, u64 a_dim, u64 b_dim) {
  params.validate();
  if (phi.values.size() != params.theta) throw DomainError("Phi must have theta values");
  for (u64 v : phi.values)
    if (v >= params.sigma * params.sigma) throw DomainError("Phi value out of range");
  if (params.r > a_dim || params.r > b_dim) throw DomainError("need r <= min(a_dim, b_dim)");
  FactoredMatrix out;
  out.a_dim = a_dim;
  out.b_dim = b_dim;
  out.side = params.side_len();
  for (u64 i = 0; i < params.r; ++i) {
    u64 lmulti = 0, rmulti = 0;
    for (u64 g = 0; g < params.theta; ++g) {
      auto [u1, u2] = digits(phi.values[g], params.sigma);
      u64 ldig = (params.pi[i][g] == 1) ? u1 : u2;
      u64 rdig = (params.pi[i][g] == 1) ? u2 : u1;  // slot 3 - pi_i(g)
      lmulti = lmulti * params.sigma + (ldig - 1);
      rmulti = rmulti * params.sigma + (rdig - 1);
    }
    out.left[i * out.side + lmulti] = 1;
    out.right[i * out.side + rmulti] = 1;
  }
  return out;
}

std::vector<PhiFunction> enumerate_family(const PhiParams& params, u64 budget) {
  Integer size = params.family_size();
  if (size > Integer(static_cast<unsigned long>(budget))) {
    throw DomainError("family size " + size.get_str() + " exceeds budget " +
                      std::to_string(budget));
  }
  u64 n = static_cast<u64>(size.get_ui());
  u64 s2 = params.sigma * params.sigma;
  std::vector<PhiFunction> out;
  out.reserve(n);
  PhiFunction cur;
  cur.values.assign(params.theta, 0);
  for (u64 c = 0; c < n; ++c) {
    out.push_back(cur);
    for (u64 g = params.theta; g-- > 0;) {
      if (++cur.values[g] < s2) break;
      cur.values[g] = 0;
    }
  }
  return out;
}

std::set<UnitPos> unit_set(const PhiParams& params, UnitMethod method, u64 budget) {
  params.validate();
  std::set<UnitPos> out;
  const u64 side = params.side_len();
  if (method == UnitMethod::BruteForce) {
    for (const auto& phi : enumerate_family(params, budget)) {
      FactoredMatrix m = phi_tensor(params, phi, params.r, params.r);
      for (const auto& [lkey, lv] : m.left) {
        (void)lv;
        u64 i = lkey / side, alpha = lkey % side;
        for (const auto& [rkey, rv] : m.right) {
          (void)rv;
          u64 j = rkey / side, beta = rkey % side;
          if (i != j) out.insert({i, alpha, j, beta});
        }
      }
    }
    return out;
  }
  // closed form: alpha and beta agree at every digit where pi_i and pi_j differ
  for (u64 i = 0; i < params.r; ++i) {
    for (u64 j = 0; j < params.r; ++j) {
      if (i == j) continue;
      std::vector<u64> mismatch;
      for (u64 g = 0; g < params.theta; ++g)
        if (params.pi[i][g] != params.pi[j][g]) mismatch.push_back(g);
      // enumerate alpha fully, beta free only off the mismatch positions
      u64 free_count = params.theta - mismatch.size();
      u64 free_total = pow_u64_checked(params.sigma, free_count, "free digit span");
      if (side > budget || free_total > budget / std::max<u64>(side, 1))
        throw DomainError("closed-form unit enumeration exceeds budget");
      std::vector<bool> is_mismatch(params.theta, false);
      for (u64 g : mismatch) is_mismatch[g] = true;
      for (u64 a = 0; a < side; ++a) {
        // digits of alpha, most significant first
        std::vector<u64> ad(params.theta);
        u64 tmp = a;
        for (u64 g = params.theta; g-- > 0;) {
          ad[g] = tmp % params.sigma;
          tmp /= params.sigma;
        }
        for (u64 f = 0; f < free_total; ++f) {
          std::vector<u64> bd(params.theta);
          u64 ff = f;
          for (u64 g = params.theta; g-- > 0;) {
            if (is_mismatch[g]) {
              bd[g] = ad[g];
            } else {
              bd[g] = ff % params.sigma;
              ff /= params.sigma;
            }
          }
          u64 b = 0;
          for (u64 g = 0; g < params.theta; ++g) b = b * params.sigma + bd[g];
          out.insert({i, a, j, b});
        }
      }
    }
  }
  return out;
}

MatrixQ w_sigma_clone(const PhiParams& params, u64 a_dim, u64 b_dim) {
  if (params.r > a_dim || params.r > b_dim) throw DomainError("need r <= min(a_dim, b_dim)");
  const u64 side = params.side_len();
  MatrixQ out(static_cast<std::int64_t>(a_dim * side), static_cast<std::int64_t>(b_dim * side));
  for (u64 i = 0; i < params.r; ++i)
    for (u64 a = 0; a < side; ++a)
      for (u64 b = 0; b < side; ++b)
        out.set(static_cast<std::int64_t>(i * side + a), static_cast<std::int64_t>(i * side + b), 1);
  return out;
}

std::optional<std::map<std::string, Rational>> membership_in_M(const PhiParams& params,
                                                               const MatrixQ& target, u64 budget) {
  params.validate();
  const u64 side = params.side_len();
  const u64 a_dim = static_cast<u64>(target.rows()) / side;
  const u64 b_dim = static_cast<u64>(target.cols()) / side;
  if (a_dim * side != static_cast<u64>(target.rows()) ||
      b_dim * side != static_cast<u64>(target.cols()) || a_dim < params.r || b_dim < params.r)
    throw DomainError("target dims incompatible with the family block structure");

  auto family = enumerate_family(params, budget);
  // Diagonal entry (i, alpha, beta) -> index of the unique covering Phi.
  std::map<std::array<u64, 3>, std::size_t> cover;
  // Off-diagonal unit -> covering Phi indices (for residual computation).
  std::map<UnitPos, std::vector<std::size_t>> off_cover;
  for (std::size_t f = 0; f < family.size(); ++f) {
    FactoredMatrix m = phi_tensor(params, family[f], a_dim, b_dim);
    for (const auto& [lkey, lv] : m.left) {
      (void)lv;
      u64 i = lkey / side, alpha = lkey % side;
      for (const auto& [rkey, rv] : m.right) {
        (void)rv;
        u64 j = rkey / side, beta = rkey % side;
        if (i == j) {
          auto [it, fresh] = cover.insert({{i, alpha, beta}, f});
          if (!fresh && it->second != f)
            throw DomainError("diagonal coverage not unique; family structure broken");
        } else {
          off_cover[{i, alpha, j, beta}].push_back(f);
        }
      }
    }
  }

  // Pass 1: diagonal entries pin the family coefficients.
  std::vector<std::optional<Rational>> coeff(family.size());
  for (u64 i = 0; i < a_dim; ++i) {
    if (i >= params.r || i >= b_dim) continue;
    for (u64 a = 0; a < side; ++a)
      for (u64 b = 0; b < side; ++b) {
        const Rational& tv =
            target.at(static_cast<std::int64_t>(i * side + a), static_cast<std::int64_t>(i * side + b));
        auto it = cover.find({i, a, b});
        if (it == cover.end()) {
          if (tv != 0) return std::nullopt;  // uncovered diagonal position
          continue;
        }
        auto& c = coeff[it->second];
        if (!c)
          c = tv;
        else if (*c != tv)
          return std::nullopt;  // inconsistent pinning
      }
  }
  for (auto& c : coeff)
    if (!c) c = Rational(0);

  // Pass 2: off-diagonal residuals must be unit-coverable; anything outside
  // the first r x r blocks must vanish.
  std::map<std::string, Rational> solution;
  for (std::size_t f = 0; f < family.size(); ++f)
    if (*coeff[f] != 0) solution[phi_key(family[f])] = *coeff[f];

  for (const auto& [rc, tv] : target.entries()) {
    u64 i = static_cast<u64>(rc.first) / side, a = static_cast<u64>(rc.first) % side;
    u64 j = static_cast<u64>(rc.second) / side, b = static_cast<u64>(rc.second) % side;
    if (i >= params.r || j >= params.r) {
      if (tv != 0) return std::nullopt;
      continue;
    }
    if (i == j) continue;  // handled in pass 1
    Rational span_val = 0;
    UnitPos pos{i, a, j, b};
    auto it = off_cover.find(pos);
    if (it != off_cover.end())
      for (std::size_t f : it->second) span_val += *coeff[f];
    Rational residual = tv - span_val;
    if (residual != 0) {
      if (it == off_cover.end()) return std::nullopt;  // not a U position
      solution[unit_key(pos)] = residual;
    }
  }
  // positions covered by units/family but zero in target still may need units
  for (const auto& [pos, fs] : off_cover) {
    Rational span_val = 0;
    for (std::size_t f : fs) span_val += *coeff[f];
    const Rational& tv = target.at(static_cast<std::int64_t>(pos.i * side + pos.alpha),
                                   static_cast<std::int64_t>(pos.j * side + pos.beta));
    Rational residual = tv - span_val;
    if (residual != 0) solution[unit_key(pos)] = residual;
  }
  return solution;
}

std::optional<std::map<std::string, Rational>> membership_in_M(
    const PhiParams& params, const std::vector<FactoredMatrix>& target, u64 budget) {
  if (target.empty()) throw DomainError("empty factored-matrix target");
  MatrixQ sum(static_cast<std::int64_t>(target[0].a_dim * target[0].side),
              static_cast<std::int64_t>(target[0].b_dim * target[0].side));
  for (const auto& f : target) {
    if (f.a_dim != target[0].a_dim || f.b_dim != target[0].b_dim || f.side != target[0].side)
      throw DomainError("factored matrices with mismatched dims");
    for (const auto& [lk, lv] : f.left)
      for (const auto& [rk, rv] : f.right)
        sum.add(static_cast<std::int64_t>(lk), static_cast<std::int64_t>(rk), lv * rv);
  }
  return membership_in_M(params, sum, budget);
}

StructureReport verify_family_structure(const PhiParams& params, u64 budget, u64 seed,
                                        int span_samples) {
  params.validate();
  StructureReport rep;
  rep.family_size = params.family_size();
  const u64 side = params.side_len();
  auto family = enumerate_family(params, budget);

  // (1) diagonal coverage with multiplicity exactly one
  std::map<std::array<u64, 3>, u64> cover_count;
  rep.all_rank_one = true;
  for (const auto& phi : family) {
    FactoredMatrix m = phi_tensor(params, phi, params.r, params.r);
    if (m.left.size() != params.r || m.right.size() != params.r) {
      rep.all_rank_one = false;
      rep.witnesses.push_back("phi tensor with unexpected support at " + phi_key(phi));
    }
    for (const auto& [lkey, lv] : m.left) {
      (void)lv;
      u64 i = lkey / side, alpha = lkey % side;
      auto r = m.right.lower_bound(i * side);
      for (; r != m.right.end() && r->first < (i + 1) * side; ++r)
        cover_count[{i, alpha, r->first % side}]++;
    }
  }
  rep.coverage_exactly_once = true;
  for (u64 i = 0; i < params.r && rep.coverage_exactly_once; ++i)
    for (u64 a = 0; a < side && rep.coverage_exactly_once; ++a)
      for (u64 b = 0; b < side; ++b) {
        auto it = cover_count.find({i, a, b});
        u64 c = it == cover_count.end() ? 0 : it->second;
        if (c != 1) {
          rep.coverage_exactly_once = false;
          rep.witnesses.push_back("diagonal entry (" + std::to_string(i) + "," + std::to_string(a) +
                                  "," + std::to_string(b) + ") covered " + std::to_string(c) +
                                  " times");
          break;
        }
      }

  // (2) unit sets
  auto closed = unit_set(params, UnitMethod::ClosedForm, budget);
  auto brute = unit_set(params, UnitMethod::BruteForce, budget);
  rep.unit_sets_agree = closed == brute;
  if (!rep.unit_sets_agree) rep.witnesses.push_back("closed-form and brute-force unit sets differ");
  rep.unit_count = closed.size();

  // (3) off-diagonal block-diagonality on random span elements: at every
  // digit position where pi_i and pi_j differ, row and column digits agree.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff_dist(-9, 9);
  std::vector<UnitPos> units(brute.begin(), brute.end());
  rep.off_diagonal_block_diagonal = true;
  for (int s = 0; s < span_samples && rep.off_diagonal_block_diagonal; ++s) {
    // random combination, sparse representation of the off-diagonal blocks
    std::map<std::pair<u64, u64>, Rational> entries;  // (row, col) restricted to i != j
    for (const auto& phi : family) {
      Rational c = coeff_dist(rng);
      if (c == 0) continue;
      FactoredMatrix m = phi_tensor(params, phi, params.r, params.r);
      for (const auto& [lkey, lv] : m.left)
        for (const auto& [rkey, rv] : m.right)
          if (lkey / side != rkey / side) entries[{lkey, rkey}] += c * lv * rv;
    }
    for (const auto& u : units) {
      Rational c = coeff_dist(rng);
      if (c != 0) entries[{u.i * side + u.alpha, u.j * side + u.beta}] += c;
    }
    for (const auto& [rc, v] : entries) {
      if (v == 0) continue;
      u64 i = rc.first / side, alpha = rc.first % side;
      u64 j = rc.second / side, beta = rc.second % side;
      std::vector<u64> ad(params.theta), bd(params.theta);
      u64 ta = alpha, tb = beta;
      for (u64 g = params.theta; g-- > 0;) {
        ad[g] = ta % params.sigma;
        ta /= params.sigma;
        bd[g] = tb % params.sigma;
        tb /= params.sigma;
      }
      for (u64 g = 0; g < params.theta; ++g) {
        if (params.pi[i][g] != params.pi[j][g] && ad[g] != bd[g]) {
          rep.off_diagonal_block_diagonal = false;
          rep.witnesses.push_back("span element entry off the block diagonal at block (" +
                                  std::to_string(i) + "," + std::to_string(j) + ") digit " +
                                  std::to_string(g));
          break;
        }
      }
      if (!rep.off_diagonal_block_diagonal) break;
    }
  }

  // (4) clone membership by exact solve
  MatrixQ w = w_sigma_clone(params, params.r, params.r);
  auto sol = membership_in_M(params, w, budget);
  rep.clone_membership = sol.has_value();
  if (sol) {
    // verify the certificate: family part with coefficient 1 everywhere
    for (const auto& phi : family) {
      auto it = sol->find(phi_key(phi));
      if (it == sol->end() || it->second != 1) {
        rep.clone_membership = false;
        rep.witnesses.push_back("clone membership: family coefficient not 1 at " + phi_key(phi));
        break;
      }
    }
  } else {
    rep.witnesses.push_back("clone membership solve failed");
  }
  return rep;
}

u64 find_clear_class(u64 r, u64 omega, const std::vector<std::vector<u64>>& classes,
                     const std::vector<std::vector<u64>>& excluded) {
  if (r < 1 || omega < 1) throw DomainError("need r, omega >= 1");
  if (classes.size() != omega) throw DomainError("need exactly omega classes");
  if (excluded.size() != r) throw DomainError("need exactly r excluded sets");
  const u64 universe = r * omega;
  std::vector<std::int64_t> owner(universe, -1);
  u64 covered = 0;
  for (u64 d = 0; d < omega; ++d)
    for (u64 e : classes[d]) {
      if (e >= universe) throw DomainError("class element out of range");
      if (owner[e] != -1) throw DomainError("classes are not disjoint");
      owner[e] = static_cast<std::int64_t>(d);
      ++covered;
    }
  if (covered != universe) throw DomainError("classes do not partition the universe");
  for (u64 a = 0; a < r; ++a) {
    // |Z_alpha| < omega / r, strictly
    if (excluded[a].size() * r >= omega)
      throw DomainError("excluded set too large: need |Z| < omega/r");
    for (u64 e : excluded[a])
      if (e < a * omega || e >= (a + 1) * omega)
        throw DomainError("excluded element outside its block S_alpha");
  }
  std::vector<bool> dirty(omega, false);
  for (const auto& z : excluded)
    for (u64 e : z) dirty[static_cast<u64>(owner[e])] = true;
  for (u64 d = 0; d < omega; ++d)
    if (!dirty[d]) return d;
  throw DomainError("no clear class found; hypotheses violated");  // unreachable under the checks
}

}  // namespace tensorforge
