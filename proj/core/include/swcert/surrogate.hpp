#pragma once

#include "swcert/system.hpp"

namespace swcert {

/// Fixed, version-pinned open-loop-stable plant with 8 states and 4 inputs,
/// unit noise covariance and unit cost weights (W = Q = I8, R = I4).
/// Matrices are checked in under core/data/surrogate.json.
LinearSystem builtin_surrogate();

/// Coefficient alpha such that K* + alpha * ones(m, n) destabilizes the
/// surrogate loop (spectral radius slightly above 1); tuned at generation
/// time and recorded in the data file.
double surrogate_destabilizing_alpha();

}  // namespace swcert
