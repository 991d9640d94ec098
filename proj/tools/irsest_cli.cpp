// Copyright 2026 The irsest Authors
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

// irsest: Monte Carlo sweeps, single points and the oracle self-check.
//
// Exit codes: 0 success, 1 numerical/runtime failure, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irsest/config.hpp"
#include "irsest/csv.hpp"
#include "irsest/mc.hpp"
#include "irsest/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr const char* kSeedEnv = "IRSEST_SEED";

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool normalized = false;
  std::string estimator = "mmse";
  std::string pilot = "shortcut";
  std::size_t trials = 10000;
  unsigned workers = 1;
  bool resample_geometry = false;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON system configuration");
  cmd->add_option("--seed", o.seed, "master seed (overrides $IRSEST_SEED)");
  cmd->add_flag("--normalized", o.normalized,
                "unit path gains: channel scale is v^2");
  cmd->add_option("--estimator", o.estimator, "estimator")
      ->check(CLI::IsMember({"mmse", "asymptotic", "conditional", "posterior"}));
  cmd->add_option("--pilot", o.pilot, "pilot handling")
      ->check(CLI::IsMember({"shortcut", "dft"}));
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  cmd->add_option("--workers", o.workers,
                  "worker threads (0 = all cores); never changes results");
  cmd->add_flag("--resample-geometry", o.resample_geometry,
                "draw new user positions every trial");
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
}

irsest::EstimatorKind parse_estimator(const std::string& s) {
  if (s == "asymptotic") return irsest::EstimatorKind::kAsymptotic;
  if (s == "conditional") return irsest::EstimatorKind::kConditional;
  if (s == "posterior") return irsest::EstimatorKind::kPosterior;
  return irsest::EstimatorKind::kMmse;
}

// Flag wins over environment wins over config file.
irsest::SystemConfig resolve_config(const CommonOptions& o) {
  irsest::SystemConfig c =
      o.config_path.empty() ? irsest::SystemConfig{} : irsest::load_config(o.config_path);
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      c.master_seed = v;
    } catch (const std::exception&) {
      throw irsest::ConfigError(std::string("bad ") + kSeedEnv + ": " + env);
    }
  }
  if (o.seed) c.master_seed = *o.seed;
  if (o.normalized) c.normalized_units = true;
  return c;
}

// "1,2,4" or "start:stop:step" (stop inclusive).
std::vector<double> parse_values(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw irsest::ConfigError("bad value '" + s + "' in --values");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3)
      throw irsest::ConfigError("range must be start:stop:step");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (step == 0.0 || (stop - start) / step < 0.0)
      throw irsest::ConfigError("range step does not reach stop");
    const double count = std::floor((stop - start) / step + 1e-9);
    if (count > 1e6) throw irsest::ConfigError("range has too many values");
    for (int k = 0; k <= static_cast<int>(count); ++k)
      out.push_back(start + k * step);
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  if (out.empty()) throw irsest::ConfigError("--values is empty");
  return out;
}

irsest::RunOptions run_options(const CommonOptions& o) {
  irsest::RunOptions r;
  r.resample_geometry = o.resample_geometry;
  r.pilot_mode = o.pilot == "dft" ? irsest::PilotMode::kDft
                                  : irsest::PilotMode::kShortcut;
  r.workers = o.workers;
  return r;
}

int write_rows(const std::string& out_path, const std::string& axis_name,
               const std::vector<irsest::MseRecord>& records) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitRuntime;
    }
    out = &file;
  }
  irsest::write_csv_header(*out);
  int status = kExitOk;
  for (const auto& r : records) {
    irsest::write_csv_row(*out, irsest::to_csv_row(axis_name, r));
    if (r.failed) {
      std::cerr << "error: point " << axis_name << "="
                << irsest::format_double(r.axis_value) << " failed: "
                << r.failure << "\n";
      status = kExitRuntime;
    }
  }
  out->flush();
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS channel estimation laboratory"};
  app.require_subcommand(1);

  CommonOptions sweep_opts;
  std::string axis;
  std::string values_text;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"m1", "snr", "v"}));
  sweep->add_option("--values", values_text, "list a,b,c or range a:b:step")
      ->required()
      ->allow_extra_args(false);

  CommonOptions point_opts;
  std::optional<int> m1;
  std::optional<double> snr;
  std::optional<double> amplitude;
  auto* point = app.add_subcommand("point", "evaluate a single configuration");
  add_common(point, point_opts);
  point->add_option("--m1", m1, "number of IRS elements");
  point->add_option("--snr", snr, "SNR in dB");
  point->add_option("--v", amplitude, "scattering amplitude in [0, 1]");

  bool fast = false;
  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "run the oracle self-check");
  validate->add_flag("--fast", fast, "reduced grids");
  validate->add_option("--config", validate_config,
                       "also check that this configuration loads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep) {
      const auto base = resolve_config(sweep_opts);
      irsest::SweepSpec spec;
      spec.axis = axis == "m1"    ? irsest::SweepAxis::kIrsElements
                  : axis == "snr" ? irsest::SweepAxis::kSnrDb
                                  : irsest::SweepAxis::kAmplitude;
      spec.values = parse_values(values_text);
      spec.trials = sweep_opts.trials;
      spec.base_config = base;
      spec.estimator_kind = parse_estimator(sweep_opts.estimator);
      const auto ro = run_options(sweep_opts);
      spec.resample_geometry = ro.resample_geometry;
      spec.pilot_mode = ro.pilot_mode;
      spec.workers = ro.workers;
      spec.validate();
      for (double v : spec.values) irsest::apply_axis(base, spec.axis, v);
      const auto records = irsest::run_sweep(spec);
      return write_rows(sweep_opts.out, std::string(irsest::to_string(spec.axis)),
                        records);
    }
    if (*point) {
      auto c = resolve_config(point_opts);
      if (m1) c.num_irs_elements = *m1;
      if (snr) c.set_snr_db(*snr);
      if (amplitude) c.scattering_amplitude = *amplitude;
      c.validate();
      irsest::MseRecord r;
      try {
        r = irsest::run_point(c, parse_estimator(point_opts.estimator),
                              point_opts.trials, run_options(point_opts));
      } catch (const irsest::ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        r.failed = true;
        r.failure = e.what();
        r.mse_empirical = r.mse_stderr = r.lower_bound = r.upper_bound =
            r.mse_asymptotic = std::nan("");
        r.trials = point_opts.trials;
        r.seed = c.master_seed;
      }
      return write_rows(point_opts.out, "point", {r});
    }
    if (*validate) {
      if (!validate_config.empty()) irsest::load_config(validate_config);
      const auto checks = irsest::run_validation(fast);
      bool ok = true;
      for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name
                  << "  error=" << c.achieved << "  tolerance=" << c.tolerance
                  << "  cases=" << c.cases;
        if (!c.note.empty()) std::cout << "  (" << c.note << ")";
        std::cout << "\n";
        ok = ok && c.passed;
      }
      std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
      return ok ? kExitOk : kExitRuntime;
    }
  } catch (const irsest::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
