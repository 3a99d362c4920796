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

#include "gradsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

namespace gradsim {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T ParseValue(std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::string FormatValue(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

template <class T>
std::string FormatValue(T value) {
  return std::to_string(value);
}

template <class Root>
struct Field {
  std::string_view key;
  std::function<void(Root&, std::string_view)> parse;
  std::function<std::string(const Root&)> format;
};

// `get` is a generic lambda returning a reference to the bound member.
template <class Root, class Getter>
Field<Root> Bind(std::string_view key, Getter get) {
  using T = std::remove_cvref_t<decltype(get(std::declval<Root&>()))>;
  return {key,
          [get](Root& r, std::string_view v) { get(r) = ParseValue<T>(v); },
          [get](const Root& r) { return FormatValue(get(r)); }};
}

#define GRADSIM_FIELD(Root, name, member) \
  Bind<Root>(name, [](auto& r) -> auto& { return r.member; })

const std::vector<Field<ProtocolParams>>& ProtocolFields() {
  using P = ProtocolParams;
  static const std::vector<Field<P>> fields = {
      GRADSIM_FIELD(P, "rho_instruct", rho_instruct),
      GRADSIM_FIELD(P, "rho_dpo", rho_dpo),
      GRADSIM_FIELD(P, "rho_grpo", rho_grpo),
      GRADSIM_FIELD(P, "rho_image", rho_image),
      GRADSIM_FIELD(P, "alpha_default_score", alpha_default_score),
      GRADSIM_FIELD(P, "gamma_min_score", gamma_min_score),
      GRADSIM_FIELD(P, "lambda_top_multiplier", lambda_top_multiplier),
      GRADSIM_FIELD(P, "rho_test", rho_test),
      GRADSIM_FIELD(P, "rho_synth", rho_synth),
      GRADSIM_FIELD(P, "kappa_test", kappa_test),
      GRADSIM_FIELD(P, "kappa_synth", kappa_synth),
      GRADSIM_FIELD(P, "omega_test_weight", omega_test_weight),
      GRADSIM_FIELD(P, "delta_image_weight", delta_image_weight),
      GRADSIM_FIELD(P, "epsilon_duplicate", epsilon_duplicate),
      GRADSIM_FIELD(P, "alpha_suspicion", alpha_suspicion),
      GRADSIM_FIELD(P, "s_first", s_first),
      GRADSIM_FIELD(P, "s_penalty", s_penalty),
      GRADSIM_FIELD(P, "rho_penalty", rho_penalty),
      GRADSIM_FIELD(P, "window_weight_1d", window_weights[0].weight),
      GRADSIM_FIELD(P, "window_weight_3d", window_weights[1].weight),
      GRADSIM_FIELD(P, "window_weight_7d", window_weights[2].weight),
      GRADSIM_FIELD(P, "beta_sigmoid", beta_sigmoid),
      GRADSIM_FIELD(P, "omega_linear", omega_linear),
      GRADSIM_FIELD(P, "gamma_steepness", gamma_steepness),
      GRADSIM_FIELD(P, "mu_shift", mu_shift),
      GRADSIM_FIELD(P, "nu_power", nu_power),
      GRADSIM_FIELD(P, "text_pool_min", text_pool_min),
      GRADSIM_FIELD(P, "text_pool_max", text_pool_max),
      GRADSIM_FIELD(P, "image_pool_min", image_pool_min),
      GRADSIM_FIELD(P, "image_pool_max", image_pool_max),
      GRADSIM_FIELD(P, "retry_c", retry_c),
      GRADSIM_FIELD(P, "vtrust", vtrust),
  };
  return fields;
}

const std::vector<Field<SimConfig>>& SimFields() {
  using S = SimConfig;
  static const std::vector<Field<S>> fields = [] {
    std::vector<Field<S>> f = {
        GRADSIM_FIELD(S, "n_rounds", n_rounds),
        GRADSIM_FIELD(S, "tasks_per_round", tasks_per_round),
        GRADSIM_FIELD(S, "seed", seed),
        GRADSIM_FIELD(S, "rounds_per_day", rounds_per_day),
        GRADSIM_FIELD(S, "max_retries", max_retries),
        GRADSIM_FIELD(S, "failure_rate", failure_rate),
        GRADSIM_FIELD(S, "local_step", local_step),
        GRADSIM_FIELD(S, "min_dataset_size", min_dataset_size),
        GRADSIM_FIELD(S, "max_dataset_size", max_dataset_size),
        GRADSIM_FIELD(S, "landscape_dimension", landscape.dimension),
        GRADSIM_FIELD(S, "noise_sigma", landscape.noise_sigma),
        GRADSIM_FIELD(S, "test_synth_correlation",
                      landscape.test_synth_correlation),
        GRADSIM_FIELD(S, "curvature_min", landscape.curvature_min),
        GRADSIM_FIELD(S, "curvature_max", landscape.curvature_max),
        GRADSIM_FIELD(S, "base_loss", landscape.base_loss),
        GRADSIM_FIELD(S, "task_jitter", landscape.task_jitter),
        GRADSIM_FIELD(S, "n_random_search", population.random_search),
        GRADSIM_FIELD(S, "n_local_search", population.local_search),
        GRADSIM_FIELD(S, "n_exploiter", population.exploiter),
        GRADSIM_FIELD(S, "n_overfitter", population.overfitter),
        GRADSIM_FIELD(S, "n_unreliable", population.unreliable),
        GRADSIM_FIELD(S, "unreliable_failure_rate",
                      population.unreliable_failure_rate),
        GRADSIM_FIELD(S, "overfit_margin", population.overfit_margin),
    };
    for (const Field<ProtocolParams>& pf : ProtocolFields()) {
      f.push_back({pf.key,
                   [parse = pf.parse](S& s, std::string_view v) {
                     parse(s.protocol, v);
                   },
                   [format = pf.format](const S& s) {
                     return format(s.protocol);
                   }});
    }
    return f;
  }();
  return fields;
}

#undef GRADSIM_FIELD

template <class Root>
void ApplyText(std::string_view text, const std::vector<Field<Root>>& fields,
               Root& root) {
  std::set<std::string, std::less<>> seen;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_number);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ProtocolError("config " + where + ": expected key = value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));

    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const auto& f) { return f.key == key; });
    if (it == fields.end()) {
      throw ProtocolError(std::string(key) + ": unknown config key (" + where +
                          ")");
    }
    if (!seen.emplace(key).second) {
      throw ProtocolError(std::string(key) + ": repeated config key (" +
                          where + ")");
    }
    try {
      it->parse(root, value);
    } catch (const std::invalid_argument& e) {
      throw ProtocolError(std::string(key) + ": " + e.what() + " (" + where +
                          ")");
    }
  }
}

}  // namespace

ProtocolParams ParseProtocolParams(std::string_view text) {
  ProtocolParams params;
  ApplyText(text, ProtocolFields(), params);
  return ValidateParams(params);
}

SimConfig ParseSimConfig(std::string_view text) {
  SimConfig config;
  ApplyText(text, SimFields(), config);
  ValidateSimConfig(config);
  return config;
}

SimConfig LoadSimConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ProtocolError("config: cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseSimConfig(buf.str());
}

std::string FormatSimConfig(const SimConfig& config) {
  std::string out;
  for (const Field<SimConfig>& f : SimFields()) {
    out += f.key;
    out += " = ";
    out += f.format(config);
    out += '\n';
  }
  return out;
}

}  // namespace gradsim
