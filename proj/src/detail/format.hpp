#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace magbill::detail {

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace magbill::detail
