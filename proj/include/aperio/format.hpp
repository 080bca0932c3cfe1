#pragma once

#include <string>
#include <string_view>

namespace aperio {

/// Shortest decimal string that round-trips to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// Inverse of format_number. Throws kInvalidArgument on trailing garbage.
double parse_number(std::string_view s);

}  // namespace aperio
