/// @file grid.cpp

#include "hrns/grid.hpp"

#include <string>

namespace hrns {

MacGrid2D make_mac_grid(int n) {
    if (n < 8) throw std::invalid_argument("make_mac_grid: n must be >= 8, got " + std::to_string(n));
    if (n % 2 != 0) throw std::invalid_argument("make_mac_grid: n must be even, got " + std::to_string(n));
    return MacGrid2D(n);
}

} // namespace hrns
