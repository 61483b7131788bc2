#pragma once

#include <string>

namespace tunelab {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace tunelab
