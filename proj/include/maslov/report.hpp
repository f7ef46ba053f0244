#pragma once

#include <string>
#include <vector>

namespace maslov {

// One named check. `tag` names the inequality or identity being asserted.
struct Check {
    std::string name;
    std::string tag;
    bool passed = true;
    std::string detail;
};

struct Report {
    std::string subject;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    Check& add(std::string name, std::string tag, bool passed, std::string detail = {})
    {
        checks.push_back({std::move(name), std::move(tag), passed, std::move(detail)});
        return checks.back();
    }
    void note(std::string text) { notes.push_back(std::move(text)); }

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const Check* first_failure() const
    {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
    // Appends the other report's checks with their names prefixed.
    void merge(const Report& other, const std::string& prefix = {})
    {
        for (const auto& c : other.checks)
            checks.push_back({prefix.empty() ? c.name : prefix + ": " + c.name, c.tag, c.passed, c.detail});
        for (const auto& n : other.notes) notes.push_back(prefix.empty() ? n : prefix + ": " + n);
    }
};

}  // namespace maslov
