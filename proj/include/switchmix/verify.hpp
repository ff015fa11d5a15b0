#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace switchmix {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    // Scratch space for the determinism check.
    std::filesystem::path scratch = std::filesystem::temp_directory_path() / "switchmix-verify";
};

inline constexpr int kCriterionCount = 11;

std::string criterion_name(int id);

// Runs one acceptance criterion; never throws for a failed check, only
// reports it.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options = {});

// "PASS  [ 5] name  (detail, 1.23 s)"
std::string format_result(const CriterionResult& result);

} // namespace switchmix
