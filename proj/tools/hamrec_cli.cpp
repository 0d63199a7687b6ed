// Copyright 2026 The hamrec Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hamrec/scenario.hpp"
#include "hamrec/version.hpp"

namespace {

// Exit codes: 0 success, 2 config validation, 3 reconstruction failure,
// 4 integration failure, 5 unknown scenario or IO, 1 anything else.
enum ExitCode {
  kOk = 0,
  kGeneric = 1,
  kConfig = 2,
  kReconstruction = 3,
  kIntegration = 4,
  kNotFound = 5,
};

hamrec::Scenario load_scenario(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) {
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw hamrec::Error("cannot read " + name_or_path);
    std::ostringstream text;
    text << in.rdbuf();
    return hamrec::Scenario::from_json_text(text.str());
  }
  return hamrec::bundled_scenario(name_or_path);
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const hamrec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const hamrec::UnknownScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotFound;
  } catch (const hamrec::SingularSystemError& e) {
    std::cerr << "reconstruction error: " << e.what() << "\n";
    return kReconstruction;
  } catch (const hamrec::UnobservableZError& e) {
    std::cerr << "reconstruction error: " << e.what() << "\n";
    return kReconstruction;
  } catch (const hamrec::NoConvergenceError& e) {
    std::cerr << "reconstruction error: " << e.what() << "\n";
    return kReconstruction;
  } catch (const hamrec::IntegrationFailureError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return kIntegration;
  } catch (const hamrec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeneric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hamrec: reconstructs time-dependent one- and two-qubit Hamiltonians "
      "from synthetic continuous weak-measurement records"};
  app.set_version_flag("--version", hamrec::kVersion);
  app.require_subcommand(1);

  std::string default_out = "out";
  if (const char* env = std::getenv("HAMREC_OUTPUT_ROOT")) default_out = env;

  // run
  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  std::string run_target;
  std::string out_dir = default_out;
  uint64_t seed_override = 0;
  long shots_override = 0;
  bool noiseless = false;
  run->add_option("scenario", run_target,
                  "Bundled scenario name or path to a config/manifest JSON")
      ->required();
  run->add_option("--out", out_dir, "Output root directory");
  auto* seed_opt = run->add_option("--seed", seed_override, "Override the seed");
  auto* shots_opt = run->add_option("--shots", shots_override,
                                    "Override the shots per initial state");
  run->add_flag("--noiseless", noiseless,
                "Set noise_sigma = 0 and shots = 1 for this run");

  // list
  auto* list = app.add_subcommand("list", "List bundled scenarios");

  // describe
  auto* describe =
      app.add_subcommand("describe", "Describe a bundled scenario");
  std::string describe_target;
  describe->add_option("scenario", describe_target, "Scenario name")->required();

  // validate
  auto* validate =
      app.add_subcommand("validate", "Validate a scenario config without running");
  std::string validate_target;
  validate
      ->add_option("scenario", validate_target,
                   "Bundled scenario name or path to a config/manifest JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    return run_guarded([&] {
      for (const auto& name : hamrec::list_scenarios())
        std::cout << name << "\n";
      return kOk;
    });
  }
  if (describe->parsed()) {
    return run_guarded([&] {
      std::cout << hamrec::describe_scenario(describe_target);
      return kOk;
    });
  }
  if (validate->parsed()) {
    return run_guarded([&] {
      hamrec::Scenario sc = load_scenario(validate_target);
      sc.validate();
      std::cout << "ok: " << sc.name << "\n";
      return kOk;
    });
  }
  return run_guarded([&] {
    hamrec::Scenario sc = load_scenario(run_target);
    if (*seed_opt) sc.seed = seed_override;
    if (*shots_opt) sc.shots = shots_override;
    if (noiseless) sc.noiseless = true;
    auto summary = hamrec::run_scenario(sc, out_dir);
    std::cout << "wrote " << summary.output_dir << "\n";
    if (sc.kind == "standard") {
      std::cout << "mean reconstruction fidelity: " << summary.mean_fidelity
                << "\n";
    }
    return kOk;
  });
}
