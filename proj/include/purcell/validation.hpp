#pragma once

// Built-in analytic self-checks for the `validate` subcommand.

#include <string>
#include <vector>

namespace purcell::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Closed-form and ODE checks of the emitter model; no field simulation.
std::vector<CheckResult> run_analytic_checks();

/// Fixed-width pass/fail table.
std::string format_table(const std::vector<CheckResult>& results);

} // namespace purcell::validation
