#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rlr/agg_lr.hpp"
#include "rlr/boosting.hpp"
#include "rlr/data_io.hpp"

namespace rlr {

struct ScoredLabel {
  double score = 0.0;  // probability, or any score for the ranking metrics
  int label = 0;
};

// Mann-Whitney probability that a random positive outranks a random
// negative, ties counted half. MetricError unless both classes are present.
double auc_roc(std::span<const ScoredLabel> scores);

// Area under the precision-recall step curve. Thresholds sweep the distinct
// scores in descending order; inside a block of tied scores the curve moves
// through the achievable points TP_a + k, FP_a + k * dFP/dTP (k = 1..dTP),
// each contributing 1/P of recall at its own precision. MetricError when
// there are no positives.
double auc_pr(std::span<const ScoredLabel> scores);

// -sum [y log p + (1 - y) log(1 - p)].
double nll(std::span<const ScoredLabel> scores);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};
// (FPR, TPR) at each distinct threshold, starting at (0, 0).
std::vector<CurvePoint> roc_points(std::span<const ScoredLabel> scores);
// (recall, precision) at each achievable point of the sweep.
std::vector<CurvePoint> pr_points(std::span<const ScoredLabel> scores);

struct MetricReport {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  double nll = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double wall_time_s = 0.0;
};

MetricReport evaluate_scores(std::span<const ScoredLabel> scores);

enum class Method { kBoostedRLR, kAggLR };
std::string method_name(Method method);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

struct CVAggregate {
  MeanStd auc_roc;
  MeanStd auc_pr;
  MeanStd nll;
  double wall_time_s = 0.0;  // sum over folds
};

struct CVResult {
  Method method = Method::kBoostedRLR;
  double lambda = 0.0;
  std::vector<MetricReport> folds;
  CVAggregate aggregate;
  // Boosted models, one per fold (empty for AGG-LR).
  std::vector<RLRModel> models;
};

MeanStd mean_std(std::span<const double> values);

// Trains on each fold's training split and scores its test split. Folds
// run one at a time; `boost.jobs` parallelises candidate scoring inside.
CVResult cross_validate(const DatasetBundle& bundle, const FoldConfig& folds, const BoostConfig& boost,
                        Method method = Method::kBoostedRLR, const LRConfig& agg = {});

// One JSON object per line: a `fold` record per fold and an `aggregate`
// record. Wall-clock times are included only when `with_timing` is set, so
// that reports from identical runs compare byte for byte.
std::string format_report_records(const CVResult& result, bool with_timing);
std::string format_report_table(const CVResult& result);

}  // namespace rlr
