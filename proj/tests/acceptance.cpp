// Acceptance gate. `acceptance N` checks criterion N; no argument checks all.
// One line per criterion: "C<N> PASS|FAIL <summary>". Exit status is the
// number of failed criteria (capped at 1 when a single one is requested).

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "gdm/aggregation.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/reference.hpp"
#include "gdm/session.hpp"
#include "random_values.hpp"

using namespace gdm;
using gdm::testing::dyadic_value;
using gdm::testing::real_value;
using gdm::testing::uniform;

namespace {

// Pinned tolerances.
constexpr double kTableTol = 0.001;
constexpr double kVectorTol = 0.005;
constexpr double kNormTol = 1e-9;
constexpr double kResidualTol = 1e-8;
constexpr double kOracleTol = 1e-8;
constexpr double kExpectationShare = 0.90;
constexpr double kBetaShare = 0.85;
constexpr double kFixtureSeconds = 1.0;
constexpr double kPropertySeconds = 120.0;

const std::vector<double> kLambda1{0.272, 0.301, 0.189, 0.237};
const std::vector<double> kLambda2{0.306, 0.227, 0.235, 0.232};
const std::vector<double> kLambda{0.292, 0.257, 0.217, 0.234};
const std::vector<double> kGroup{0.453, 0.339, 0.421, 0.443, 0.536};
const std::vector<std::string> kRanking{"a5", "a1", "a4", "a3", "a2"};

struct Verdict {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string vec(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt("%.4f", v[k]);
  return s + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const DecisionReport& end_to_end() {
  static const DecisionReport r = run_pipeline(reference::example_session());
  return r;
}

std::vector<std::string> names_in_order(const GroupResult& g) {
  std::vector<std::string> out;
  for (auto j : g.ranking) out.push_back(reference::example_session().alternatives[j]);
  return out;
}

bool strict(const GroupResult& g) {
  return std::none_of(g.tied_with_next.begin(), g.tied_with_next.end(), [](bool b) { return b; });
}

Verdict share_criterion(const std::string& quantity, double share, const char* label) {
  const auto checks = reference::cell_checks(end_to_end());
  std::size_t total = 0, within = 0, unexplained = 0, misses = 0;
  std::string first_unexplained;
  for (const auto& c : checks) {
    if (c.quantity != quantity) continue;
    ++total;
    if (c.within) {
      ++within;
      continue;
    }
    ++misses;
    if (c.entry == nullptr) {
      ++unexplained;
      if (first_unexplained.empty()) first_unexplained = c.id;
    }
  }
  const double frac = total ? double(within) / double(total) : 0.0;
  const bool pass = total == 60 && frac >= share && unexplained == 0;
  auto s = fmt("%s: %zu/%zu within +/-%.3f (%.1f%%, need >= %.0f%%); %zu misses, %zu without a ledger entry", label,
               within, total, kTableTol, 100.0 * frac, 100.0 * share, misses, unexplained);
  if (!first_unexplained.empty()) s += " (first: " + first_unexplained + ")";
  return {pass, s};
}

Verdict c1() { return share_criterion("expectation", kExpectationShare, "expectation reproduction"); }

Verdict c2() {
  const auto l2 = reference::lambda2_from_tables();
  const double dev = reference::max_deviation(l2, kLambda2);
  return {dev <= kTableTol, "deviation chain from distance tables: lambda2 = " + vec(l2) +
                                fmt(", max deviation %.5f (tolerance %.3f)", dev, kTableTol)};
}

Verdict c3() {
  // The printed lambda1 sums to 0.999; it is rescaled to a unit sum before combining.
  const double sum = std::accumulate(kLambda1.begin(), kLambda1.end(), 0.0);
  std::vector<double> l1 = kLambda1;
  for (auto& x : l1) x /= sum;
  const auto w = combined_weights(l1, kLambda2, 0.4);
  const double dev = reference::max_deviation(w.combined, kLambda);
  return {dev <= kTableTol, "combined weights at eta=0.4: lambda = " + vec(w.combined) +
                                fmt(", max deviation %.5f (tolerance %.3f)", dev, kTableTol)};
}

Verdict c4() {
  const auto fits = reference::fits_from_step8();
  const auto& g = reference::golden();
  bool pass = fits.size() == g.fitted.size();
  double dev = 0.0, norm_err = 0.0, residual = 0.0;
  for (std::size_t i = 0; pass && i < fits.size(); ++i) {
    dev = std::max(dev, reference::max_deviation(fits[i].preference, g.fitted[i]));
    const auto& v = fits[i].preference;
    norm_err = std::max(norm_err, std::abs(std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)) - 1.0));
    residual = std::max(residual, fits[i].residual);
  }
  pass = pass && dev <= kVectorTol && norm_err <= kNormTol && residual <= kResidualTol;
  return {pass, fmt("vector fitting from step-8 matrices: max deviation %.5f (tolerance %.3f), unit-norm error %.1e "
                    "(<= %.0e), max residual %.1e (<= %.0e)",
                    dev, kVectorTol, norm_err, kNormTol, residual, kResidualTol)};
}

Verdict c5() {
  const auto printed = reference::group_from_published();
  const double dev_p = reference::max_deviation(printed.group_vector, kGroup);
  const bool rank_p = names_in_order(printed) == kRanking && strict(printed);

  const auto t0 = std::chrono::steady_clock::now();
  const auto e2e = run_pipeline(reference::example_session());
  const double elapsed = seconds_since(t0);
  const double dev_e = reference::max_deviation(e2e.group.group_vector, kGroup);
  const bool rank_e = names_in_order(e2e.group) == kRanking && strict(e2e.group);

  const bool pass = dev_p <= kVectorTol && rank_p && dev_e <= kVectorTol && rank_e && elapsed < kFixtureSeconds;
  std::string s = "group result (tolerance " + fmt("%.3f", kVectorTol) + "): from printed intermediates " +
                  vec(printed.group_vector) + fmt(" dev %.4f, ranking %s", dev_p, rank_p ? "exact" : "WRONG") +
                  "; end-to-end " + vec(e2e.group.group_vector) +
                  fmt(" dev %.4f, ranking %s; run %.3fs (< %.0fs)", dev_e, rank_e ? "exact" : "WRONG", elapsed,
                      kFixtureSeconds);
  return {pass, s};
}

Verdict c6() { return share_criterion("beta", kBetaShare, "uncertainty reproduction"); }

// Property suites, restated compactly.
Verdict c7() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260);
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok && std::find(failed.begin(), failed.end(), what) == failed.end()) failed.push_back(what);
  };
  const LinguisticScale s(7, 5);

  // Distance axioms.
  for (int k = 0; k < 10000; ++k) {
    const auto x = real_value(rng, s), y = real_value(rng, s), z = real_value(rng, s);
    const double dxy = hamming_distance(x, y, s);
    expect(dxy >= 0.0 && dxy <= 1.0 + 1e-12 && hamming_distance(x, x, s) == 0.0, "distance range/reflexivity");
    expect(dxy == hamming_distance(y, x, s), "distance symmetry");
    expect(dxy + hamming_distance(y, z, s) >= hamming_distance(x, z, s) - 1e-12, "triangle inequality");
  }

  // Algebra laws, exact on dyadic subscripts.
  const double lambdas[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (int k = 0; k < 1000; ++k) {
    const auto x = dyadic_value(rng, s), y = dyadic_value(rng, s), z = dyadic_value(rng, s);
    const double l1 = lambdas[rng() % 7], l2 = lambdas[rng() % 7];
    expect(x + y == y + x && x * y == y * x, "commutativity");
    expect((x + y) + z == x + (y + z) && (x * y) * z == x * (y * z), "associativity");
    expect(x * (y + z) == (x * y) + (x * z), "distributivity");
    expect(scale(l1, x + y) == scale(l1, x) + scale(l1, y), "scalar distributivity");
    expect(scale(l1 + l2, x) == scale(l1, x) + scale(l2, x), "scalar sum law");
  }

  // Aggregation theorems.
  auto weights = [&](std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = uniform(rng, 0.05, 1.0);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= sum;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return w;
  };
  auto close = [](const TwoDULV& a, const TwoDULV& b) {
    return std::abs(a.judgment.lo - b.judgment.lo) <= 1e-12 * std::max(1.0, b.judgment.lo) &&
           std::abs(a.judgment.hi - b.judgment.hi) <= 1e-12 * std::max(1.0, b.judgment.hi) &&
           a.reliability == b.reliability;
  };
  int observed_above_max = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<TwoDULV> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(real_value(rng, s, 0.01));
    const auto w = weights(n);
    const double a = uniform(rng, 0.1, 12.0) * (rng() % 3 == 0 ? -1.0 : 1.0);
    const AlphaParam alpha(a);
    const auto y = dulgwa(xs, WeightVector(w), alpha);

    expect(close(dulgwa(std::vector<TwoDULV>(n, xs[0]), WeightVector(w), alpha), xs[0]), "idempotency");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<TwoDULV> px;
    std::vector<double> pw;
    for (auto p : perm) px.push_back(xs[p]), pw.push_back(w[p]);
    expect(close(dulgwa(px, WeightVector(pw), alpha), y), "joint permutation");

    std::vector<TwoDULV> up = xs;
    for (auto& v : up) {
      v.judgment.lo += uniform(rng, 0.0, 0.5);
      v.judgment.hi = std::max(v.judgment.lo, v.judgment.hi + uniform(rng, 0.0, 0.5));
      v.reliability.lo += uniform(rng, 0.0, 0.5);
      v.reliability.hi = std::max(v.reliability.lo, v.reliability.hi + uniform(rng, 0.0, 0.5));
    }
    const auto yu = dulgwa(up, WeightVector(w), alpha);
    expect(y.judgment.lo <= yu.judgment.lo + 1e-12 && y.judgment.hi <= yu.judgment.hi + 1e-12 &&
               y.reliability.lo <= yu.reliability.lo && y.reliability.hi <= yu.reliability.hi,
           "componentwise monotonicity");

    // Upper bound: every aggregate endpoint is at most the largest input
    // endpoint for any alpha; the expectation bound is provable for alpha in (0, 1].
    double emax = 0.0, amax = 0.0, bmax = 0.0;
    for (const auto& v : xs) {
      emax = std::max(emax, expectation(v, s));
      amax = std::max(amax, v.judgment.lo);
      bmax = std::max(bmax, v.judgment.hi);
    }
    expect(y.judgment.lo <= amax * (1 + 1e-12) && y.judgment.hi <= bmax * (1 + 1e-12), "endpoint upper bound");
    const auto yc = dulgwa(xs, WeightVector(w), AlphaParam(uniform(rng, 0.05, 1.0)));
    expect(expectation(yc, s) <= emax + 1e-12, "expectation upper bound, alpha in (0,1]");
    if (a > 1.0 && expectation(y, s) > emax + 1e-12) ++observed_above_max;
  }

  // Fitting against a dense eigendecomposition, and local maximality.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto random_matrix = [&](std::size_t t, std::size_t m) {
    Grid<double> g(t, m);
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t c = 0; c < m; ++c) g(r, c) = u01(rng);
    return ExpectationMatrix{"e", std::move(g)};
  };
  for (int k = 0; k < 100; ++k) {
    const auto sm = random_matrix(1 + rng() % 6, 2 + rng() % 7);
    Eigen::MatrixXd S(sm.rows.rows(), sm.rows.cols());
    for (std::size_t t = 0; t < sm.rows.rows(); ++t)
      for (std::size_t j = 0; j < sm.rows.cols(); ++j) S(t, j) = sm.rows(t, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.transpose() * S);
    Eigen::VectorXd v = es.eigenvectors().col(S.cols() - 1);
    if (v.sum() < 0) v = -v;
    const auto f = fit_preference(sm);
    double dev = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) dev = std::max(dev, std::abs(f.preference[j] - v(j)));
    expect(dev <= kOracleTol && f.residual <= kResidualTol, "fit vs dense eigendecomposition");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto sm = random_matrix(3, 5);
  const auto f = fit_preference(sm);
  const double best = fit_objective(sm, f.preference);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> v = f.preference;
    const double eps = uniform(rng, 1e-4, 1.0);
    for (auto& x : v) x += eps * gauss(rng);
    const double n = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (auto& x : v) x /= n;
    expect(fit_objective(sm, v) <= best + 1e-9, "local maximality");
  }

  const double elapsed = seconds_since(t0);
  expect(elapsed < kPropertySeconds, "time budget");
  std::string summary = fmt("property suites: 10^4 distance triples, 10^3 algebra and aggregation instances, 100 oracle fits, "
                      "10^3 perturbations in %.2fs (< %.0fs); alpha>1 expectation above max observed %d times (not "
                      "asserted)",
                      elapsed, kPropertySeconds, observed_above_max);
  for (const auto& w : failed) summary += "; FAILED " + w;
  return {failed.empty(), summary};
}

Verdict c8() {
  const Session& session = reference::example_session();
  const auto a = canonical_report(run_pipeline(session));
  const auto b = canonical_report(run_pipeline(session));
  const auto dir = std::filesystem::temp_directory_path() / ("gdm_acceptance_" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  save_session(session, dir / "s.json");
  const auto loaded = load_session(dir / "s.json").session;
  save_session(loaded, dir / "t.json");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const bool same_files = slurp(dir / "s.json") == slurp(dir / "t.json");
  std::filesystem::remove_all(dir);
  const auto back = parse_report(a);
  const bool pass = a == b && loaded == session && same_files && canonical_report(back) == a;
  return {pass, fmt("determinism and persistence: reports byte-identical %s (%zu bytes), load(save(session)) %s, "
                    "report reparse %s",
                    a == b ? "yes" : "no", a.size(), loaded == session && same_files ? "exact" : "differs",
                    canonical_report(back) == a ? "exact" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Verdict()> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8};
  int first = 1, last = 8;
  if (argc > 1) {
    first = last = std::atoi(argv[1]);
    if (first < 1 || first > 8) {
      std::fprintf(stderr, "usage: acceptance [1-8]\n");
      return 2;
    }
  }
  int failures = 0;
  for (int n = first; n <= last; ++n) {
    Verdict v;
    try {
      v = criteria[n - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("C%d %s %s\n", n, v.pass ? "PASS" : "FAIL", v.summary.c_str());
    failures += v.pass ? 0 : 1;
  }
  return failures;
}
