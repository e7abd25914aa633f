#pragma once

#include <cstdio>
#include <string>

namespace epifit {

// Full-precision decimal rendering (17 significant digits, '.' separator,
// locale independent) used for every numeric CSV cell.
inline std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace epifit
