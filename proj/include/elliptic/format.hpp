#pragma once

// Number formatting shared by the reports and CSV writers.

#include <string>

namespace elliptic {

/// Shortest decimal string that parses back to exactly x ("inf", "-inf" and
/// "nan" for non-finite values). Independent of the global locale.
std::string format_double(double x);

}  // namespace elliptic
