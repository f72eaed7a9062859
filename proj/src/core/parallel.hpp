#pragma once

#include <cstddef>
#include <functional>

namespace jcrnet {

// Number of worker threads: hardware concurrency, capped by the
// JCRNET_THREADS environment variable (read once).
int worker_count();

// Runs fn(tile) for tile in [0, tiles). Tiles are fixed units of work chosen
// by the caller; which thread runs a tile never affects the result, so thread
// count does not change any output bit. Falls back to inline execution for
// small tile counts.
void parallel_tiles(std::size_t tiles, const std::function<void(std::size_t)>& fn);

}  // namespace jcrnet
