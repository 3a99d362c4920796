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

#ifndef GRADSIM_LANDSCAPE_HPP_
#define GRADSIM_LANDSCAPE_HPP_

#include <span>
#include <vector>

#include "gradsim/protocol.hpp"
#include "gradsim/rng.hpp"

namespace gradsim {

struct LandscapeParams {
  int dimension = 4;
  double noise_sigma = 0.02;
  double test_synth_correlation = 0.9;
  double curvature_min = 0.5;
  double curvature_max = 2.0;
  // Loss at the optimum.
  double base_loss = 0.5;
  // Per-axis stddev of a task's optimum around its category optimum.
  double task_jitter = 0.03;
};

void ValidateLandscapeParams(const LandscapeParams& params);

// Separable quadratic bowl over [0,1]^d standing in for a fine-tuning run:
// loss = base_loss + sum_k curvature_k (theta_k - optimum_k)^2 + noise.
struct Landscape {
  std::vector<double> optimum;
  std::vector<double> curvature;
  double base_loss = 0.0;
  double noise_sigma = 0.0;
  double correlation = 1.0;
};

// Random optimum in [0.1, 0.9]^d and curvatures in the configured range.
Landscape MakeLandscape(const LandscapeParams& params, Rng& rng);

// Copy of `parent` with the optimum displaced by N(0, task_jitter) per axis,
// clamped into [0,1].
Landscape JitterLandscape(const Landscape& parent,
                          const LandscapeParams& params, Rng& rng);

// Noise-free loss. Throws ProtocolError if theta has the wrong dimension or
// leaves [0,1]^d.
double BaseLoss(const Landscape& landscape, std::span<const double> theta);

// Draws one evaluation. The primary loss (test / text-guided) gets noise
// sigma*z1; the secondary (synth / no-text) gets sigma*(rho z1 +
// sqrt(1-rho^2) z2). A positive overfit_margin is subtracted from the test
// loss and added to the synthetic loss (text tasks only). Losses are clamped
// at zero.
Losses EvaluateLandscape(const Landscape& landscape,
                         std::span<const double> theta, TaskType task_type,
                         Rng& rng, double overfit_margin = 0.0);

}  // namespace gradsim

#endif  // GRADSIM_LANDSCAPE_HPP_
