#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "switchmix/verify.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: switchmix_acceptance [--criterion N]...\n";
            return 2;
        }
    }
    if (ids.empty()) {
        for (int id = 1; id <= switchmix::kCriterionCount; ++id)
            ids.push_back(id);
    }
    bool all = true;
    for (int id : ids) {
        const auto result = switchmix::run_criterion(id);
        std::cout << switchmix::format_result(result) << std::endl;
        all = all && result.passed;
    }
    return all ? 0 : 1;
}
