#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlr/error.hpp"
#include "rlr/evaluation.hpp"

namespace rlr {

namespace {

// Blocks of tied scores in descending score order: (positives, negatives).
struct Block {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

std::vector<Block> descending_blocks(std::span<const ScoredLabel> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  for (const ScoredLabel& s : scores) {
    if (s.label != 0 && s.label != 1) throw MetricError("labels must be 0 or 1");
    if (std::isnan(s.score)) throw MetricError("score is NaN");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || scores[order[k]].score != scores[order[k - 1]].score) blocks.emplace_back();
    (scores[order[k]].label == 1 ? blocks.back().pos : blocks.back().neg) += 1;
  }
  return blocks;
}

std::pair<std::uint64_t, std::uint64_t> class_counts(std::span<const Block> blocks) {
  std::uint64_t p = 0, n = 0;
  for (const Block& b : blocks) {
    p += b.pos;
    n += b.neg;
  }
  return {p, n};
}

}  // namespace

double auc_roc(std::span<const ScoredLabel> scores) {
  std::vector<Block> blocks = descending_blocks(scores);
  auto [p, n] = class_counts(blocks);
  if (p == 0 || n == 0) throw MetricError("AUC-ROC needs both positive and negative examples");
  // Twice the Mann-Whitney statistic, kept integral.
  unsigned __int128 twice = 0;
  std::uint64_t neg_below = n;
  for (const Block& b : blocks) {
    neg_below -= b.neg;
    twice += static_cast<unsigned __int128>(b.pos) * (2 * neg_below + b.neg);
  }
  return static_cast<double>(static_cast<long double>(twice) / (2.0L * p * n));
}

std::vector<CurvePoint> pr_points(std::span<const ScoredLabel> scores) {
  std::vector<Block> blocks = descending_blocks(scores);
  auto [p, n] = class_counts(blocks);
  (void)n;
  if (p == 0) throw MetricError("AUC-PR needs at least one positive example");
  std::vector<CurvePoint> out;
  double tp = 0.0, fp = 0.0;
  for (const Block& b : blocks) {
    for (std::uint64_t k = 1; k <= b.pos; ++k) {
      double t = tp + static_cast<double>(k);
      double f = fp + static_cast<double>(k) * static_cast<double>(b.neg) / static_cast<double>(b.pos);
      out.push_back({t / static_cast<double>(p), t / (t + f)});
    }
    tp += static_cast<double>(b.pos);
    fp += static_cast<double>(b.neg);
  }
  return out;
}

double auc_pr(std::span<const ScoredLabel> scores) {
  std::vector<Block> blocks = descending_blocks(scores);
  auto [p, n] = class_counts(blocks);
  (void)n;
  if (p == 0) throw MetricError("AUC-PR needs at least one positive example");
  // Each achievable point adds 1/P of recall at its own precision.
  long double area = 0.0L;
  long double tp = 0.0L, fp = 0.0L;
  for (const Block& b : blocks) {
    for (std::uint64_t k = 1; k <= b.pos; ++k) {
      long double t = tp + static_cast<long double>(k);
      long double f = fp + static_cast<long double>(k) * b.neg / static_cast<long double>(b.pos);
      area += t / (t + f);
    }
    tp += b.pos;
    fp += b.neg;
  }
  return static_cast<double>(area / p);
}

std::vector<CurvePoint> roc_points(std::span<const ScoredLabel> scores) {
  std::vector<Block> blocks = descending_blocks(scores);
  auto [p, n] = class_counts(blocks);
  if (p == 0 || n == 0) throw MetricError("ROC curve needs both positive and negative examples");
  std::vector<CurvePoint> out{{0.0, 0.0}};
  std::uint64_t tp = 0, fp = 0;
  for (const Block& b : blocks) {
    tp += b.pos;
    fp += b.neg;
    out.push_back({static_cast<double>(fp) / static_cast<double>(n), static_cast<double>(tp) / static_cast<double>(p)});
  }
  return out;
}

double nll(std::span<const ScoredLabel> scores) {
  double sum = 0.0;
  for (const ScoredLabel& s : scores) {
    if (s.label != 0 && s.label != 1) throw MetricError("labels must be 0 or 1");
    if (!(s.score >= 0.0 && s.score <= 1.0)) throw MetricError("NLL needs probabilities in [0, 1]");
    sum += s.label == 1 ? -std::log(s.score) : -std::log1p(-s.score);
  }
  return sum;
}

MetricReport evaluate_scores(std::span<const ScoredLabel> scores) {
  MetricReport r;
  for (const ScoredLabel& s : scores) (s.label == 1 ? r.n_pos : r.n_neg) += 1;
  r.auc_roc = auc_roc(scores);
  r.auc_pr = auc_pr(scores);
  r.nll = nll(scores);
  return r;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace rlr
