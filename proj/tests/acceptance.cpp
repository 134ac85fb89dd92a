// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Exits nonzero on failure.
// argv[1] must point at the tensorforge CLI binary (used by the criteria that
// exercise the command-line surface).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include "tensorforge/linalg.hpp"
#include "tensorforge/mu_optimizer.hpp"
#include "tensorforge/param_search.hpp"
#include "tensorforge/phi_family.hpp"
#include "tensorforge/rank_bounds.hpp"
#include "tensorforge/secant.hpp"
#include "tensorforge/serialize.hpp"

#include <json.hpp>

using namespace tensorforge;
using json = nlohmann::json;

namespace {

std::string g_cli;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct CliRun {
  int exit_code;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string strip_seconds(std::string text) {
  // wall-clock timing is the one report field exempt from byte determinism
  static const std::regex seconds_re("\"seconds\":[0-9.eE+-]+,?");
  return std::regex_replace(text, seconds_re, "");
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: mu reproduction -----------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  CliRun run = run_cli("mu --step 0.001");
  double secs = elapsed(t0);
  bool ok = run.exit_code == 0;
  double mu = 0;
  if (ok) {
    auto rep = json::parse(run.output, nullptr, false);
    ok = !rep.is_discarded() && rep.contains("mu");
    if (ok) mu = rep["mu"].get<double>();
  }
  ok = ok && std::fabs(mu - 0.52733) <= 2e-4 && secs <= 120.0;
  std::ostringstream os;
  os << "mu --step 0.001 -> " << mu << " (target 0.52733 +- 2e-4), " << secs << " s";
  report(1, ok, os.str());
}

// ---- criterion 2: parameter search ----------------------------------------

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  CliRun run = run_cli("params --mu 52733/100000 --m-max 60000");
  double secs = elapsed(t0);
  bool ok = run.exit_code == 0;
  std::string got = "(no result)";
  if (ok) {
    auto rep = json::parse(run.output, nullptr, false);
    ok = !rep.is_discarded() && rep.contains("m") && !rep["m"].is_null();
    if (ok) {
      ok = rep["m"] == 48352 && rep["k"] == 328 && rep["r_lo"] == "790097248" &&
           rep["r_hi"] == "790097406";
      got = "m=" + rep["m"].dump() + " k=" + rep["k"].dump() + " r=[" +
            rep["r_lo"].get<std::string>() + "," + rep["r_hi"].get<std::string>() + "]";
    }
  }
  ok = ok && secs <= 900.0;
  std::ostringstream os;
  os << "params search -> " << got << " (want m=48352 k=328 r=[790097248,790097406]), " << secs
     << " s";
  report(2, ok, os.str());
}

// ---- criterion 3: Phi-family structure ------------------------------------

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto [r, theta, sigma] : std::vector<std::array<u64, 3>>{{3, 2, 4}, {2, 1, 2}}) {
    PhiParams params = PhiParams::with_default_pi(r, theta, sigma);
    StructureReport rep = verify_family_structure(params, 1u << 22, 2024, 100);
    bool this_ok = rep.coverage_exactly_once && rep.all_rank_one &&
                   rep.off_diagonal_block_diagonal && rep.unit_sets_agree && rep.clone_membership;
    ok = ok && this_ok;
    detail += "(r=" + std::to_string(r) + ",theta=" + std::to_string(theta) +
              ",sigma=" + std::to_string(sigma) + (this_ok ? " ok) " : " FAILED) ");
    if (!this_ok)
      for (const auto& w : rep.witnesses) detail += w + "; ";
  }
  double secs = elapsed(t0);
  ok = ok && secs <= 60.0;
  report(3, ok, "family structure " + detail + std::to_string(secs) + " s");
}

// ---- criterion 4: secant dimensions ---------------------------------------

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (std::int64_t m : {4, 5}) {
    std::int64_t rg = generic_rank(m).value;
    for (std::int64_t r = 1; r <= rg; ++r) {
      std::int64_t formula = secant_dim_formula(m, r).value;
      std::int64_t sampled = terracini_dimension(m, r, 3, 0xc0ffee + m * 100 + r);
      if (sampled != formula) {
        ok = false;
        detail += "(m=" + std::to_string(m) + ",r=" + std::to_string(r) + ": " +
                  std::to_string(sampled) + " != " + std::to_string(formula) + ") ";
      }
    }
  }
  double secs = elapsed(t0);
  ok = ok && secs <= 600.0;
  report(4, ok,
         "terracini matches min{r(3m-2), m^3} for m in {4,5}, r up to generic rank " + detail +
             std::to_string(secs) + " s");
}

// ---- criterion 5: rank certificates ---------------------------------------

void criterion_5() {
  bool ok = true;
  std::string detail;
  for (std::int64_t n = 1; n <= 6; ++n) {
    auto cert = certified_rank(Tensor3::diagonal(n));
    if (!(cert.exact && cert.lower == n)) {
      ok = false;
      detail += "(diag " + std::to_string(n) + ") ";
    }
  }
  // augment(0, rank-one spanned subspaces): exact u_A + u_B + u_C
  auto unit = [](std::int64_t rows, std::int64_t cols, std::int64_t i, std::int64_t j) {
    MatrixQ m(rows, cols);
    m.set(i, j, 1);
    return m;
  };
  Tensor3 zero = Tensor3::zero(2, 2, 2);
  MatrixSubspace ua(2, 2, {unit(2, 2, 0, 0), unit(2, 2, 1, 1)});
  MatrixSubspace ub(2, 2, {unit(2, 2, 0, 1)});
  MatrixSubspace uc(2, 2, {unit(2, 2, 1, 0)});
  auto cert = certified_rank(augment(zero, ua, ub, uc));
  if (!(cert.exact && cert.lower == 4)) {
    ok = false;
    detail += "(augmented-zero: [" + std::to_string(cert.lower) + "," +
              std::to_string(cert.upper) + "] != 4) ";
  }
  // clone invariance on 20 random cubes
  std::mt19937_64 rng(0xace);
  std::uniform_int_distribution<int> val(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor3 t(3, 3, 3);
    for (std::int64_t i = 0; i < 3; ++i)
      for (std::int64_t j = 0; j < 3; ++j)
        for (std::int64_t k = 0; k < 3; ++k) t.set(i, j, k, val(rng));
    auto base = certified_rank(t);
    for (std::int64_t v : {2, 3}) {
      auto cl = certified_rank(clone_tensor(t, v));
      if (cl.lower != base.lower || cl.upper != base.upper ||
          !cl.upper_witness->certifies(clone_tensor(t, v))) {
        ok = false;
        detail += "(clone trial " + std::to_string(trial) + " v=" + std::to_string(v) + ") ";
      }
    }
  }
  report(5, ok, "certified ranks: diagonals, augmented-zero, clone invariance " + detail);
}

// ---- criterion 6: appendix predicates -------------------------------------

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  AppendixReport rep = verify_appendix(10000, 1000, 31337, Rational(52733, 100000), 0);
  double secs = elapsed(t0);
  bool ok = rep.pass() && rep.samples_checked == 1000 && secs <= 120.0;
  std::ostringstream os;
  os << "verify_appendix: " << rep.samples_checked << " samples, " << rep.violations.size()
     << " violations, " << secs << " s";
  report(6, ok, os.str());
}

// ---- criterion 7: geometry inequalities -----------------------------------

void criterion_7() {
  bool ok = true;
  std::string detail;
  // P lower bound: 100 instances with r at least the saturation rank, so the
  // quotient-span argument applies at a generic point; the rare degenerate
  // draw (tangent span below m^3) is resampled
  std::mt19937_64 rng(0xfeed);
  auto saturation_rank = [](std::int64_t m) { return m == 2 ? 2 : (m == 3 ? 5 : 7); };
  auto tangent_saturated = [](const SamplePoint& p) {
    std::vector<std::vector<Rational>> gens;
    auto outer = [&](const std::vector<Rational>& x, const std::vector<Rational>& y,
                     const std::vector<Rational>& z) {
      std::vector<Rational> v(p.m * p.m * p.m, Rational(0));
      for (std::int64_t ii = 0; ii < p.m; ++ii)
        for (std::int64_t jj = 0; jj < p.m; ++jj)
          for (std::int64_t kk = 0; kk < p.m; ++kk)
            v[(ii * p.m + jj) * p.m + kk] = x[ii] * y[jj] * z[kk];
      return v;
    };
    for (std::int64_t a = 0; a < p.r; ++a)
      for (std::int64_t i = 0; i < p.m; ++i) {
        std::vector<Rational> e(p.m, Rational(0));
        e[i] = 1;
        gens.push_back(outer(e, p.y[a], p.z[a]));
        gens.push_back(outer(p.x[a], e, p.z[a]));
        gens.push_back(outer(p.x[a], p.y[a], e));
      }
    return dense_rank(std::move(gens)) == p.m * p.m * p.m;
  };
  int done = 0, attempts = 0;
  while (done < 100 && attempts < 1000) {
    ++attempts;
    std::int64_t m = 2 + static_cast<std::int64_t>(rng() % 3);
    std::int64_t span = 9 - saturation_rank(m);
    std::int64_t r = saturation_rank(m) +
                     static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
    SamplePoint p = SamplePoint::random(m, r, rng());
    if (!tangent_saturated(p)) continue;
    SubspaceProfile prof = SubspaceProfile::random(m, rng() % (m + 1), rng() % (m + 1),
                                                   rng() % (m + 1), rng());
    auto rep = check_P_lower_bound(p, prof, r);
    if (!rep.holds) {
      ok = false;
      detail += "(P bound m=" + std::to_string(m) + " r=" + std::to_string(r) + ") ";
    }
    ++done;
  }
  if (done != 100) {
    ok = false;
    detail += "(only " + std::to_string(done) + " saturated samples) ";
  }
  // image bound on 100 random profiles
  for (int trial = 0; trial < 100; ++trial) {
    std::int64_t m = 2 + static_cast<std::int64_t>(rng() % 3);
    std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 6);
    SamplePoint p = SamplePoint::random(m, r, rng());
    SubspaceProfile prof = SubspaceProfile::random(m, rng() % (m + 1), rng() % (m + 1),
                                                   rng() % (m + 1), rng());
    auto rep = check_image_bound(p, prof);
    if (!rep.holds) {
      ok = false;
      detail += "(image bound trial " + std::to_string(trial) + ") ";
    }
  }
  report(7, ok, "P lower bound and image bound on 100 random instances each " + detail);
}

// ---- criterion 8: determinism and round trip ------------------------------

void criterion_8() {
  bool ok = true;
  std::string detail;
  // byte-identical reports across worker counts (seconds excluded: wall time)
  for (const std::string& base :
       {std::string("mu --step 0.02 --refine 1"),
        std::string("params --mu 52733/100000 --m-max 3000"),
        std::string("verify-appendix --samples 120 --m-max 1500 --seed 9"),
        std::string("secant --m 4 --trials 2 --seed 5 --format csv")}) {
    CliRun one = run_cli(base + " --workers 1");
    CliRun two = run_cli(base + " --workers 2");
    CliRun four = run_cli(base + " --workers 4");
    if (one.exit_code != 0 || strip_seconds(one.output) != strip_seconds(two.output) ||
        strip_seconds(one.output) != strip_seconds(four.output)) {
      ok = false;
      detail += "(nondeterministic: " + base + ") ";
    }
  }
  // 50-file tensor corpus round trip through the CLI
  std::mt19937_64 rng(0xd15c);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 12);
  int round_trips = 0;
  for (int f = 0; f < 50; ++f) {
    Tensor3 t(2 + f % 4, 2 + (f / 4) % 3, 2 + (f / 12) % 3);
    const auto d = t.dims();
    for (std::int64_t i = 0; i < d[0]; ++i)
      for (std::int64_t j = 0; j < d[1]; ++j)
        for (std::int64_t k = 0; k < d[2]; ++k)
          if (rng() % 3 == 0) t.set(i, j, k, rat(num(rng), den(rng)));
    std::string in_path = "/tmp/tf_corpus_" + std::to_string(f) + ".json";
    std::string out_path = in_path + ".out";
    {
      std::ofstream out(in_path);
      out << serialize(t);
    }
    CliRun run = run_cli("tensor --input " + in_path + " --output " + out_path);
    std::ifstream back_in(out_path);
    std::stringstream buf;
    buf << back_in.rdbuf();
    if (run.exit_code == 0 && buf.str() == serialize(t) && deserialize_tensor(buf.str()) == t)
      ++round_trips;
  }
  if (round_trips != 50) {
    ok = false;
    detail += "(round trips " + std::to_string(round_trips) + "/50) ";
  }
  report(8, ok, "worker-count determinism and 50-file round trip " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-tensorforge-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d/8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
