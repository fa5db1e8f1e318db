#include "cgmn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "cgmn/error.hpp"

namespace cgmn {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b, std::size_t min_len,
                   const char* name) {
  if (a.size() != b.size()) throw DataError(std::string(name) + ": length mismatch");
  if (a.size() < min_len) {
    throw DataError(std::string(name) + ": need at least " + std::to_string(min_len) + " values");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw NumericError(std::string(name) + ": non-finite value");
    }
  }
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Number of inversions in v, sorting it in place.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Sum over tie groups of t(t-1)/2 for an already sorted sequence.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq&& same_as_prev) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && same_as_prev(i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

double mse(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth, 1, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth, 2, "spearman_rho");
  if (constant(pred) || constant(truth)) throw NumericError("spearman_rho: degenerate (constant input)");
  const auto rp = average_ranks(pred);
  const auto rt = average_ranks(truth);
  const double n = static_cast<double>(rp.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rp.size(); ++i) {
    const double a = rp[i] - mean, b = rt[i] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth, 2, "kendall_tau");
  if (constant(pred) || constant(truth)) throw NumericError("kendall_tau: degenerate (constant input)");
  const std::size_t n = pred.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pred[a] != pred[b] ? pred[a] < pred[b] : truth[a] < truth[b];
  });

  const auto ties_x = tied_pairs(n, [&](std::size_t i) { return pred[order[i]] == pred[order[i - 1]]; });
  const auto ties_xy = tied_pairs(n, [&](std::size_t i) {
    return pred[order[i]] == pred[order[i - 1]] && truth[order[i]] == truth[order[i - 1]];
  });

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = truth[order[i]];
  const auto swaps = count_inversions(ys, buf, 0, n);
  const auto ties_y = tied_pairs(n, [&](std::size_t i) { return ys[i] == ys[i - 1]; });

  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double num = n0 - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                     static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  const double den = std::sqrt((n0 - static_cast<double>(ties_x)) * (n0 - static_cast<double>(ties_y)));
  return num / den;
}

std::vector<std::string> top_k_ids(const std::vector<Candidate>& candidates, std::size_t k,
                                   bool by_truth) {
  std::vector<const Candidate*> sorted;
  for (const auto& c : candidates) sorted.push_back(&c);
  const auto key = [by_truth](const Candidate* c) { return by_truth ? c->truth : c->predicted; };
  std::sort(sorted.begin(), sorted.end(), [&](const Candidate* a, const Candidate* b) {
    return key(a) != key(b) ? key(a) > key(b) : a->id < b->id;
  });
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < std::min(k, sorted.size()); ++i) ids.push_back(sorted[i]->id);
  return ids;
}

double precision_at_k(const RankedQueryResult& result, std::size_t k) {
  if (k == 0) throw DataError("precision_at_k: k must be >= 1");
  if (k > result.candidates.size()) {
    throw DataError("precision_at_k: k = " + std::to_string(k) + " exceeds candidate count " +
                    std::to_string(result.candidates.size()));
  }
  std::unordered_set<std::string> ids;
  for (const auto& c : result.candidates) {
    if (!std::isfinite(c.predicted) || !std::isfinite(c.truth))
      throw NumericError("precision_at_k: non-finite score");
    if (!ids.insert(c.id).second) throw DataError("precision_at_k: duplicate candidate id '" + c.id + "'");
  }
  const auto pred = top_k_ids(result.candidates, k, false);
  const auto truth = top_k_ids(result.candidates, k, true);
  const std::unordered_set<std::string> truth_set(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (const auto& id : pred) hits += truth_set.count(id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("auc: length mismatch");
  std::size_t pos = 0, neg = 0;
  for (int l : labels) {
    if (l == 1) ++pos;
    else if (l == -1) ++neg;
    else throw DataError("auc: labels must be +1 or -1");
  }
  if (pos == 0 || neg == 0) throw DataError("auc: both classes are required (single-class input)");
  for (double s : scores)
    if (!std::isfinite(s)) throw NumericError("auc: non-finite score");

  const auto ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 1) rank_sum += ranks[i];
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

}  // namespace cgmn
