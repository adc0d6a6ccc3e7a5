// Copyright 2026 The cfusim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfusim/cache.h"

#include <stdexcept>

namespace cfusim {

CacheSim::CacheSim(uint32_t bytes, uint32_t line_bytes, uint32_t assoc)
    : assoc_(assoc), line_bytes_(line_bytes) {
  if (bytes == 0) return;
  if (line_bytes == 0 || assoc == 0 || bytes % (line_bytes * assoc) != 0)
    throw std::invalid_argument("cache geometry: bytes % (line*assoc) != 0");
  sets_ = bytes / (line_bytes * assoc);
  ways_.assign(static_cast<size_t>(sets_) * assoc_, Way{});
}

bool CacheSim::access(uint32_t addr, bool is_write) {
  uint32_t line = addr / line_bytes_;
  uint32_t set = line % sets_;
  uint32_t tag = line / sets_;
  Way* base = &ways_[static_cast<size_t>(set) * assoc_];
  ++tick_;

  for (uint32_t w = 0; w < assoc_; ++w) {
    if (base[w].valid && base[w].tag == tag) {
      base[w].last_use = tick_;
      if (is_write) base[w].dirty = true;
      ++hits_;
      return true;
    }
  }

  // Miss: fill into an invalid way, else evict the least recently used.
  uint32_t victim = 0;
  bool found_invalid = false;
  for (uint32_t w = 0; w < assoc_; ++w) {
    if (!base[w].valid) {
      victim = w;
      found_invalid = true;
      break;
    }
  }
  if (!found_invalid) {
    uint64_t oldest = base[0].last_use;
    for (uint32_t w = 1; w < assoc_; ++w) {
      if (base[w].last_use < oldest) {
        oldest = base[w].last_use;
        victim = w;
      }
    }
  }
  base[victim] = Way{tag, true, is_write, tick_};
  ++misses_;
  return false;
}

void CacheSim::reset() {
  for (Way& w : ways_) w = Way{};
  tick_ = hits_ = misses_ = 0;
}

}  // namespace cfusim
