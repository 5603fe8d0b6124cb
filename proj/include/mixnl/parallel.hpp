#pragma once

namespace mixnl {

/// Worker threads for OpenMP regions: MIXNL_THREADS if set and positive,
/// otherwise the OpenMP default.
int thread_count();

/// Overrides the thread cap for the rest of the process (0 restores the default).
void set_thread_count(int n);

} // namespace mixnl
