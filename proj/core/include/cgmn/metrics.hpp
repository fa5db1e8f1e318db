#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cgmn {

// Mean squared error. Throws DataError on empty or mismatched input.
double mse(std::span<const double> pred, std::span<const double> truth);

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Throws NumericError("degenerate")
// when either input is constant.
double spearman_rho(std::span<const double> pred, std::span<const double> truth);

// Kendall tau-b, O(n log n). Throws NumericError("degenerate") when either
// input is constant.
double kendall_tau(std::span<const double> pred, std::span<const double> truth);

struct Candidate {
  std::string id;
  double predicted = 0.0;
  double truth = 0.0;
};

struct RankedQueryResult {
  std::string query_id;
  std::vector<Candidate> candidates;
};

// Ids of the k best candidates by `key` (higher first, ties by id).
std::vector<std::string> top_k_ids(const std::vector<Candidate>& candidates, std::size_t k,
                                   bool by_truth);

// |topk(predicted) & topk(truth)| / k. Requires 1 <= k <= |candidates| and
// unique candidate ids.
double precision_at_k(const RankedQueryResult& result, std::size_t k);

// Probability that a random positive outranks a random negative, ties
// counting 1/2. Labels are +1 / -1; both classes must be present.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace cgmn
