#pragma once

namespace gibbsgeom {

// Parallel kernels keep a serial twin; both must produce identical results.
enum class Execution { serial, parallel };

void set_thread_budget(int threads);

}  // namespace gibbsgeom
