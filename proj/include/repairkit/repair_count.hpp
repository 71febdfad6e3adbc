#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace repairkit {

/// Nonnegative arbitrary-precision repair count.
using RepairCount = boost::multiprecision::cpp_int;

}  // namespace repairkit
