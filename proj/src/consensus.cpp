#include "gdm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdm {

namespace {

double dot(std::span<const double> u, std::span<const double> v) {
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) sum += u[k] * v[k];
  return sum;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void multiply(const std::vector<double>& f, std::size_t m, std::span<const double> v, std::vector<double>& out) {
  for (std::size_t r = 0; r < m; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m; ++c) sum += f[r * m + c] * v[c];
    out[r] = sum;
  }
}

double rayleigh(const std::vector<double>& f, std::size_t m, std::span<const double> v) {
  std::vector<double> fv(m);
  multiply(f, m, v, fv);
  return dot(v, fv) / dot(v, v);
}

std::vector<double> row_of(const ExpectationMatrix& s, std::size_t t, bool normalize) {
  auto row = s.rows.row(t);
  std::vector<double> out(row.begin(), row.end());
  if (normalize) {
    const double n = norm2(out);
    if (n > 0.0) {
      for (double& x : out) x /= n;
    }
  }
  return out;
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("size_mismatch", "vectors differ in length");
  const double nu = norm2(u);
  const double nv = norm2(v);
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine similarity of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

Grid<TwoDULV> expert_rounds(std::span<const RoundMatrix> rounds, std::size_t expert) {
  const std::size_t m = rounds.empty() ? 0 : rounds.front().alternatives();
  Grid<TwoDULV> out(rounds.size(), m);
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    if (expert >= rounds[t].experts() || rounds[t].alternatives() != m) {
      throw ValidationError("roster_mismatch", "round " + std::to_string(rounds[t].index) +
                                                   " does not cover the requested expert");
    }
    for (std::size_t j = 0; j < m; ++j) out(t, j) = rounds[t].entries(expert, j);
  }
  return out;
}

ExpectationMatrix expectation_matrix(const Grid<TwoDULV>& cells, const LinguisticScale& scale, std::string expert) {
  ExpectationMatrix out{std::move(expert), Grid<double>(cells.rows(), cells.cols())};
  for (std::size_t t = 0; t < cells.rows(); ++t) {
    for (std::size_t j = 0; j < cells.cols(); ++j) out.rows(t, j) = expectation(cells(t, j), scale);
  }
  return out;
}

std::vector<double> scatter_matrix(const ExpectationMatrix& s, bool normalize_rows) {
  const std::size_t m = s.rows.cols();
  std::vector<double> f(m * m, 0.0);
  for (std::size_t t = 0; t < s.rows.rows(); ++t) {
    const auto row = row_of(s, t, normalize_rows);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) f[r * m + c] += row[r] * row[c];
    }
  }
  return f;
}

double fit_objective(const ExpectationMatrix& s, std::span<const double> v, bool normalize_rows) {
  double sum = 0.0;
  for (std::size_t t = 0; t < s.rows.rows(); ++t) {
    const double p = dot(row_of(s, t, normalize_rows), v);
    sum += p * p;
  }
  return sum;
}

FittedPreference fit_preference(const ExpectationMatrix& s, const FitOptions& options) {
  const std::size_t m = s.rows.cols();
  if (m == 0 || s.rows.rows() == 0) throw DomainError("expectation matrix is empty");
  const auto f = scatter_matrix(s, options.normalize_rows);
  if (std::all_of(f.begin(), f.end(), [](double x) { return x == 0.0; })) {
    throw DomainError("expectation matrix is all zero; no preference direction");
  }

  std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> previous = v;
  std::vector<double> next(m);
  bool converged = false;
  int iterations = 0;
  while (iterations < options.max_iterations) {
    multiply(f, m, v, next);
    ++iterations;
    const double n = norm2(next);
    if (n == 0.0) throw DomainError("power iteration collapsed to the zero vector");
    double step = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      next[k] /= n;
      step = std::max(step, std::abs(next[k] - v[k]));
    }
    previous.swap(v);
    v.swap(next);
    if (step < options.step_tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("power iteration did not converge in " + std::to_string(iterations) +
                               " iterations (tied dominant eigenvalue?)",
                           rayleigh(f, m, v), rayleigh(f, m, previous));
  }

  if (std::accumulate(v.begin(), v.end(), 0.0) < 0.0) {
    for (double& x : v) x = -x;
  }
  const double length = norm2(v);
  for (double& x : v) x /= length;

  FittedPreference out;
  out.iterations = iterations;
  out.eigenvalue = rayleigh(f, m, v);
  std::vector<double> fv(m);
  multiply(f, m, v, fv);
  double r2 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double e = fv[k] - out.eigenvalue * v[k];
    r2 += e * e;
  }
  out.residual = std::sqrt(r2);
  out.preference = std::move(v);
  if (out.residual > kFitResidualBound) {
    throw ConvergenceError("eigen residual " + std::to_string(out.residual) + " exceeds bound",
                           out.eigenvalue, rayleigh(f, m, previous));
  }
  return out;
}

GroupResult rank_alternatives(std::vector<double> scores) {
  GroupResult out;
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  out.tied_with_next.assign(m > 0 ? m - 1 : 0, false);
  std::size_t start = 0;
  while (start < m) {
    std::size_t end = start + 1;
    while (end < m && scores[order[end - 1]] - scores[order[end]] <= kRankingTieTolerance) ++end;
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
    for (std::size_t k = start; k + 1 < end; ++k) out.tied_with_next[k] = true;
    start = end;
  }
  out.ranking = std::move(order);
  out.group_vector = std::move(scores);
  return out;
}

GroupResult group_preference(std::span<const FittedPreference> fitted, std::span<const double> weights) {
  if (fitted.empty()) throw ValidationError("empty_input", "no fitted preferences");
  if (fitted.size() != weights.size()) {
    throw ValidationError("size_mismatch", "one weight per fitted preference is required");
  }
  const std::size_t m = fitted.front().preference.size();
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > kExpertWeightTolerance) {
    throw ValidationError("invalid_weights", "expert weights sum to " + std::to_string(total));
  }
  std::vector<double> group(m, 0.0);
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (fitted[i].preference.size() != m) {
      throw ValidationError("size_mismatch", "fitted preferences differ in length");
    }
    for (std::size_t j = 0; j < m; ++j) group[j] += weights[i] * fitted[i].preference[j];
  }
  return rank_alternatives(std::move(group));
}

std::string format_ranking(const GroupResult& result, std::span<const std::string> names) {
  std::string out;
  for (std::size_t k = 0; k < result.ranking.size(); ++k) {
    if (k > 0) out += result.tied_with_next[k - 1] ? " = " : " > ";
    const std::size_t j = result.ranking[k];
    out += j < names.size() ? names[j] : "#" + std::to_string(j + 1);
  }
  return out;
}

}  // namespace gdm
