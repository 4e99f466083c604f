#pragma once

#include <string>

namespace srm {

// Shortest "%.12g" rendering; the one number format used in every output.
std::string fmt_real(double v);

}  // namespace srm
