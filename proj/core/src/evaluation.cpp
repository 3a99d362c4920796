// Copyright 2026 The gradsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gradsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gradsim {
namespace {

// w*a + (1-w)*b with the rounding errors of both products and the sum
// carried along. Plain evaluation gives 0.7*0.8 + 0.3*1.2 = 0.9199999999999999.
double Blend(double w, double a, double b) {
  const double v = 1.0 - w;
  const double p = w * a;
  const double q = v * b;
  const double ep = std::fma(w, a, -p);
  const double eq = std::fma(v, b, -q);
  const double s = p + q;
  const double t = s - p;
  const double es = (p - (s - t)) + (q - t);
  return s + (ep + eq + es);
}

bool ValidLoss(double x) { return std::isfinite(x) && x >= 0.0; }

// Submission ordering used for crediting and tie-breaks.
bool EarlierSubmission(const SubmissionResult& a, const SubmissionResult& b) {
  if (a.submitted_at != b.submitted_at) return a.submitted_at < b.submitted_at;
  return a.miner_id < b.miner_id;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

double MeanLoss(std::span<const double> per_example) {
  if (per_example.empty()) throw ProtocolError("mean_loss: empty loss list");
  double sum = 0.0;
  for (double x : per_example) {
    if (!ValidLoss(x)) {
      throw ProtocolError("mean_loss: losses must be finite and >= 0");
    }
    sum += x;
  }
  return sum / static_cast<double>(per_example.size());
}

double WeightedLossText(double test_loss, double synth_loss,
                        const ProtocolParams& params) {
  return Blend(params.omega_test_weight, test_loss, synth_loss);
}

double WeightedLossImage(double text_guided_loss, double no_text_loss,
                         const ProtocolParams& params) {
  return Blend(params.delta_image_weight, text_guided_loss, no_text_loss);
}

double WeightedLoss(const Losses& losses, const ProtocolParams& params) {
  if (const auto* text = std::get_if<TextLosses>(&losses)) {
    return WeightedLossText(text->test, text->synth, params);
  }
  const auto& image = std::get<ImageLosses>(losses);
  return WeightedLossImage(image.text_guided, image.no_text, params);
}

bool IsDuplicatePair(const SubmissionResult& a, const SubmissionResult& b,
                     const ProtocolParams& params) {
  const auto [a1, a2] = LossComponents(a.losses);
  const auto [b1, b2] = LossComponents(b.losses);
  return std::abs(a1 - b1) < params.epsilon_duplicate &&
         std::abs(a2 - b2) < params.epsilon_duplicate;
}

DuplicateClusters DetectDuplicates(std::span<const SubmissionResult> subs,
                                   const ProtocolParams& params) {
  DuplicateClusters result;
  result.flagged.assign(subs.size(), false);

  DisjointSets sets(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].completed) continue;
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      if (subs[j].completed && IsDuplicatePair(subs[i], subs[j], params)) {
        sets.Union(i, j);
      }
    }
  }

  std::vector<std::vector<std::size_t>> by_root(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].completed) by_root[sets.Find(i)].push_back(i);
  }
  for (auto& members : by_root) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) {
                return EarlierSubmission(subs[a], subs[b]);
              });
    for (std::size_t k = 1; k < members.size(); ++k) {
      result.flagged[members[k]] = true;
    }
    result.clusters.push_back(std::move(members));
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

double PopulationStddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

std::vector<bool> DetectSuspicious(std::span<const SubmissionResult> subs,
                                   const ProtocolParams& params,
                                   const std::vector<bool>& exclude) {
  std::vector<bool> flags(subs.size(), false);
  std::vector<std::size_t> considered;
  std::vector<double> test_losses;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].completed) continue;
    if (i < exclude.size() && exclude[i]) continue;
    const auto* text = std::get_if<TextLosses>(&subs[i].losses);
    if (text == nullptr) continue;
    considered.push_back(i);
    test_losses.push_back(text->test);
  }
  if (considered.size() < 2) return flags;

  const double sigma = PopulationStddev(test_losses);
  for (std::size_t i : considered) {
    const auto& text = std::get<TextLosses>(subs[i].losses);
    flags[i] = text.synth > text.test + params.alpha_suspicion * sigma;
  }
  return flags;
}

EvaluationRecord EvaluateTask(const TaskSpec& task,
                              std::span<const SubmissionResult> subs,
                              const ProtocolParams& params) {
  const bool image = IsImageTask(task.task_type);
  for (const SubmissionResult& s : subs) {
    if (s.task_id != task.id) {
      throw ProtocolError("evaluate_task: submission from miner " +
                          std::to_string(s.miner_id) + " references task " +
                          std::to_string(s.task_id) + ", expected " +
                          std::to_string(task.id));
    }
    if (std::holds_alternative<ImageLosses>(s.losses) != image) {
      throw ProtocolError("evaluate_task: loss modality does not match " +
                          std::string(ToString(task.task_type)) + " task");
    }
    if (s.completed) {
      const auto [l1, l2] = LossComponents(s.losses);
      if (!ValidLoss(l1) || !ValidLoss(l2)) {
        throw ProtocolError("evaluate_task: completed submission from miner " +
                            std::to_string(s.miner_id) +
                            " has a negative or non-finite loss");
      }
    }
  }

  EvaluationRecord record;
  record.task_id = task.id;
  record.outcomes.resize(subs.size());

  bool any_completed = false;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    MinerOutcome& out = record.outcomes[i];
    out.miner_id = subs[i].miner_id;
    out.flags.failed = !subs[i].completed;
    out.weighted_loss = subs[i].completed
                            ? WeightedLoss(subs[i].losses, params)
                            : std::numeric_limits<double>::quiet_NaN();
    any_completed = any_completed || subs[i].completed;
  }
  if (!any_completed) {
    record.task_failed = true;
    return record;
  }

  const DuplicateClusters duplicates = DetectDuplicates(subs, params);
  std::vector<bool> exclude(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    record.outcomes[i].flags.duplicate = duplicates.flagged[i];
    exclude[i] = duplicates.flagged[i];
  }
  const std::vector<bool> suspicious = DetectSuspicious(subs, params, exclude);

  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    record.outcomes[i].flags.suspicious = suspicious[i];
    if (!record.outcomes[i].flags.any()) valid.push_back(i);
  }
  std::sort(valid.begin(), valid.end(), [&](std::size_t a, std::size_t b) {
    const double la = record.outcomes[a].weighted_loss;
    const double lb = record.outcomes[b].weighted_loss;
    if (la != lb) return la < lb;
    return EarlierSubmission(subs[a], subs[b]);
  });
  for (std::size_t r = 0; r < valid.size(); ++r) {
    record.outcomes[valid[r]].rank = static_cast<int>(r) + 1;
    record.valid_set.push_back(subs[valid[r]].miner_id);
  }
  return record;
}

}  // namespace gradsim
