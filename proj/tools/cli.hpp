#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfpe/harness.hpp"

namespace rfpe::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 1,
    kCheckFailed = 2,
};

/// A fully resolved run: preset defaults with every override applied.
struct Scenario {
    std::string preset;
    RunConfig run;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Scenario for a named preset before overrides; throws std::invalid_argument
/// for an unknown name.
Scenario preset_scenario(const std::string& name);

/// key=value lines that reproduce `s` when fed back through --manifest.
std::string manifest_text(const Scenario& s);

/// One threshold evaluation of --check mode.
struct CheckResult {
    std::string name;
    double value = 0.0;
    bool passed = false;
};

/// Preset-specific thresholds. `traces` is the ensemble produced by `s`; some
/// checks run a reference ensemble of their own.
std::vector<CheckResult> run_checks(const Scenario& s, std::span<const Trace> traces, unsigned threads);

/// Entry point; args[0] is the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rfpe::cli
