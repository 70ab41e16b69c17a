#pragma once

namespace tvq1 {

// Number of OpenMP workers a kernel may use. Resolves, in order: forced
// serial mode (1), the TVD_THREADS environment variable (a cap), and the
// OpenMP default. Every parallel kernel in this library produces results
// that do not depend on the worker count: outputs are either written to
// independent slots or reduced through per-row partials combined in a
// fixed order.
int worker_count();

// Force all kernels onto a single worker (the CLI --deterministic switch).
void set_force_serial(bool on) noexcept;
bool force_serial() noexcept;

} // namespace tvq1
