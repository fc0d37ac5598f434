#pragma once

// Umbrella header: pose-space interpolation of rotations with radial
// basis functions, plus the linear-algebra and rotation utilities it is
// built from.

#include "qrbf/errors.hpp"     // IWYU pragma: export
#include "qrbf/io.hpp"         // IWYU pragma: export
#include "qrbf/matrix.hpp"     // IWYU pragma: export
#include "qrbf/pose_solver.hpp"  // IWYU pragma: export
#include "qrbf/rbf.hpp"        // IWYU pragma: export
#include "qrbf/rotation.hpp"   // IWYU pragma: export
