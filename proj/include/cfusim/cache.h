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

#ifndef CFUSIM_CACHE_H_
#define CFUSIM_CACHE_H_

#include <cstdint>
#include <vector>

namespace cfusim {

// Set-associative cache with true per-set LRU replacement, write-back and
// write-allocate. Functional hit/miss state only; cycle costs live in the
// timing layer.
class CacheSim {
 public:
  CacheSim() = default;  // Absent cache; access() must not be called.
  CacheSim(uint32_t bytes, uint32_t line_bytes, uint32_t assoc);

  bool present() const { return sets_ != 0; }

  // Returns true on hit. Updates LRU, allocates on miss.
  bool access(uint32_t addr, bool is_write);

  void reset();

  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }

 private:
  struct Way {
    uint32_t tag = 0;
    bool valid = false;
    bool dirty = false;
    uint64_t last_use = 0;
  };

  uint32_t sets_ = 0;
  uint32_t assoc_ = 0;
  uint32_t line_bytes_ = 0;
  uint64_t tick_ = 0;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
  std::vector<Way> ways_;
};

}  // namespace cfusim

#endif  // CFUSIM_CACHE_H_
