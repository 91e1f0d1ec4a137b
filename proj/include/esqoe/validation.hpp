#ifndef ESQOE_VALIDATION_HPP_
#define ESQOE_VALIDATION_HPP_

#include <string>
#include <vector>

namespace esqoe {

// A checker's findings; empty means valid.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string message) { violations.push_back(std::move(message)); }
    std::string summary() const;
};

inline std::string ValidationReport::summary() const {
    std::string out;
    for (const auto &v : violations)
        out += (out.empty() ? "" : "; ") + v;
    return out;
}

} // namespace esqoe

#endif
