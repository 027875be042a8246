#pragma once

namespace superlat {

/// Worker count for the OpenMP kernels. `requested` > 0 wins over the runtime
/// default; the environment variable SUPERLAT_THREADS caps either. Always >= 1.
int resolve_threads(int requested = 0);

}  // namespace superlat
