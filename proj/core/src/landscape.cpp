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

#include "gradsim/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gradsim {

void ValidateLandscapeParams(const LandscapeParams& p) {
  if (p.dimension < 1) throw ProtocolError("landscape_dimension: must be >= 1");
  if (!(p.noise_sigma >= 0.0) || !std::isfinite(p.noise_sigma)) {
    throw ProtocolError("noise_sigma: must be finite and >= 0");
  }
  if (!(p.test_synth_correlation >= 0.0 && p.test_synth_correlation <= 1.0)) {
    throw ProtocolError("test_synth_correlation: must lie in [0, 1]");
  }
  if (!(p.curvature_min > 0.0) || !(p.curvature_max >= p.curvature_min) ||
      !std::isfinite(p.curvature_max)) {
    throw ProtocolError("curvature: need 0 < curvature_min <= curvature_max");
  }
  if (!(p.base_loss >= 0.0) || !std::isfinite(p.base_loss)) {
    throw ProtocolError("base_loss: must be finite and >= 0");
  }
  if (!(p.task_jitter >= 0.0) || !std::isfinite(p.task_jitter)) {
    throw ProtocolError("task_jitter: must be finite and >= 0");
  }
}

Landscape MakeLandscape(const LandscapeParams& params, Rng& rng) {
  Landscape l;
  l.optimum.resize(params.dimension);
  l.curvature.resize(params.dimension);
  for (int k = 0; k < params.dimension; ++k) {
    l.optimum[k] = rng.Uniform(0.1, 0.9);
    l.curvature[k] = rng.Uniform(params.curvature_min, params.curvature_max);
  }
  l.base_loss = params.base_loss;
  l.noise_sigma = params.noise_sigma;
  l.correlation = params.test_synth_correlation;
  return l;
}

Landscape JitterLandscape(const Landscape& parent,
                          const LandscapeParams& params, Rng& rng) {
  Landscape l = parent;
  for (double& x : l.optimum) {
    x = std::clamp(x + rng.Normal(0.0, params.task_jitter), 0.0, 1.0);
  }
  return l;
}

double BaseLoss(const Landscape& landscape, std::span<const double> theta) {
  if (theta.size() != landscape.optimum.size()) {
    throw ProtocolError("landscape_eval: theta has dimension " +
                        std::to_string(theta.size()) + ", expected " +
                        std::to_string(landscape.optimum.size()));
  }
  double loss = landscape.base_loss;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (!(theta[k] >= 0.0 && theta[k] <= 1.0)) {
      throw ProtocolError("landscape_eval: theta outside [0,1]^d");
    }
    const double d = theta[k] - landscape.optimum[k];
    loss += landscape.curvature[k] * d * d;
  }
  return loss;
}

Losses EvaluateLandscape(const Landscape& landscape,
                         std::span<const double> theta, TaskType task_type,
                         Rng& rng, double overfit_margin) {
  const double base = BaseLoss(landscape, theta);
  const double z1 = rng.Normal();
  const double z2 = rng.Normal();
  const double rho = landscape.correlation;
  const double sigma = landscape.noise_sigma;
  double primary = base + sigma * z1;
  double secondary = base + sigma * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);

  if (IsImageTask(task_type)) {
    return ImageLosses{std::max(primary, 0.0), std::max(secondary, 0.0)};
  }
  if (overfit_margin > 0.0) {
    primary -= overfit_margin;
    secondary += overfit_margin;
  }
  return TextLosses{std::max(primary, 0.0), std::max(secondary, 0.0)};
}

}  // namespace gradsim
