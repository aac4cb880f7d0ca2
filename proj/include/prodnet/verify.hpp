#pragma once

#include <string>
#include <vector>

namespace prodnet {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double worst_error = 0.0;
    std::string detail;
};

// Full invariant/oracle suite behind `prodnet-eq verify`; deterministic.
std::vector<VerifyCheck> run_verification();

}  // namespace prodnet
