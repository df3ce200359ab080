#pragma once

namespace achab {

// Kernels with an OpenMP path keep a serial path for reference testing.
enum class Execution { Serial, Parallel };

}  // namespace achab
