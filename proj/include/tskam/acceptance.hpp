#pragma once

// The acceptance suite: one verdict per headline criterion, tolerances fixed here.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tskam {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240611;
    std::vector<std::string> only;  // ids to run; empty = all
};

std::vector<std::string> acceptance_ids();
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});
// "PASS|FAIL <id> <name>: <detail> (<seconds> s)"
std::string format_line(const CriterionResult& r);
// {"criteria": [{"id", "pass"}...]}: the part of a run that is compared against the golden file
std::string summary_json(const std::vector<CriterionResult>& rs);

}  // namespace tskam
