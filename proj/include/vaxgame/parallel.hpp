#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace vaxgame {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

unsigned worker_count();

// runs fn(i) for i in [0, n); each index runs exactly once
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

}  // namespace vaxgame
