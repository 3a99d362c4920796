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

#ifndef GRADSIM_EVALUATION_HPP_
#define GRADSIM_EVALUATION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gradsim/protocol.hpp"

namespace gradsim {

// Arithmetic mean of per-example losses. Throws on an empty list or any
// negative / non-finite entry.
double MeanLoss(std::span<const double> per_example);

double WeightedLossText(double test_loss, double synth_loss,
                        const ProtocolParams& params);
double WeightedLossImage(double text_guided_loss, double no_text_loss,
                         const ProtocolParams& params);
// Dispatches on the loss modality.
double WeightedLoss(const Losses& losses, const ProtocolParams& params);

struct DuplicateClusters {
  // Indices into the submission list; each cluster is sorted by
  // (submitted_at, miner_id) so front() is the credited member.
  std::vector<std::vector<std::size_t>> clusters;
  // flagged[i] is true for every non-credited cluster member.
  std::vector<bool> flagged;
};

// True when both loss components differ by less than epsilon.
bool IsDuplicatePair(const SubmissionResult& a, const SubmissionResult& b,
                     const ProtocolParams& params);

// Joins epsilon-close completed submissions into clusters (transitive
// closure) and flags all but the earliest member of each. Singletons are
// not reported as clusters.
DuplicateClusters DetectDuplicates(std::span<const SubmissionResult> subs,
                                   const ProtocolParams& params);

// Population standard deviation.
double PopulationStddev(std::span<const double> values);

// Flags completed text submissions whose synthetic loss exceeds their test
// loss by more than alpha * sigma, sigma being the population stddev of the
// test losses of all considered submissions. Entries with exclude[i] set
// (e.g. duplicates) are neither considered nor flagged. Fewer than two
// considered submissions flag nothing; image submissions are never flagged.
std::vector<bool> DetectSuspicious(std::span<const SubmissionResult> subs,
                                   const ProtocolParams& params,
                                   const std::vector<bool>& exclude = {});

// Full per-task evaluation: weighted losses, duplicate then suspicion flags,
// ranking of the valid set by (weighted loss, submitted_at, miner id).
// Throws ProtocolError when a submission references another task or carries
// losses of the wrong modality.
EvaluationRecord EvaluateTask(const TaskSpec& task,
                              std::span<const SubmissionResult> subs,
                              const ProtocolParams& params);

}  // namespace gradsim

#endif  // GRADSIM_EVALUATION_HPP_
