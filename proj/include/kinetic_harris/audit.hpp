#pragma once

#include <string>
#include <vector>

namespace kh {

// One named constant of a certificate with a short note on where it comes
// from.
struct AuditEntry
{
    std::string name;
    double value = 0;
    std::string tag;
};

using AuditTrail = std::vector<AuditEntry>;

} // namespace kh
