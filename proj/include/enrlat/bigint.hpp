#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace enrlat {

// Exact arithmetic everywhere. Coordinates and Gram entries stay in int64
// (the enumeration ranges keep them tiny); determinants, Smith forms and
// dual-lattice data go through cpp_int / cpp_rational.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Vec = std::vector<std::int64_t>;

inline std::int64_t to_i64(const Int& v) {
    return static_cast<std::int64_t>(v);
}

} // namespace enrlat
