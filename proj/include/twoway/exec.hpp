// Execution-mode switch for the heavy operations: Parallel runs the fill
// loops under OpenMP, Serial is the plain reference path. Both produce
// bit-identical results because every work item owns a seeded substream
// and writes to its own slot, and reductions run serially in index order.
#pragma once

namespace twoway {

enum class ExecMode { Parallel, Serial };

}  // namespace twoway
