#pragma once

#include <string>

namespace sfs {

/// Residual checks pass when residual <= tolerance, margin checks when the
/// smallest margin exceeds it.
enum class CheckKind { Residual, Margin };

/// One certified property with its worst residual (or smallest margin).
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;  ///< where the worst case occurred, on failure
    CheckKind kind = CheckKind::Residual;
};

}  // namespace sfs
