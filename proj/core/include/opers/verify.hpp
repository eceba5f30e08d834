#pragma once

#include <string>
#include <vector>

namespace opers::verify {

struct SuiteConfig {
    int canonical_instances = 100;
    int on_shell_instances = 50;
    int off_shell_instances = 50;
    int stokes_instances = 20;
    int gauge_instances = 6;
    int deformation_instances = 6;
    int mobius_instances = 20;
    double integral_tol = 1e-8;
    double stokes_tol = 1e-9;
    bool parallel = true;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    int instances = 0;
    std::string detail;
    std::string counterexample;  // JSON of the first failing instance, empty when passing
};

struct SuiteReport {
    std::string suite;
    unsigned seed = 0;
    std::vector<CheckResult> checks;

    bool pass() const;
    std::string to_json() const;
};

// algebra, canonical, bethe, integrals, covariance, or all.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, unsigned seed, const SuiteConfig& config = {});

}  // namespace opers::verify
