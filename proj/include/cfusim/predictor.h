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

#ifndef CFUSIM_PREDICTOR_H_
#define CFUSIM_PREDICTOR_H_

#include <array>
#include <cstdint>

#include "cfusim/config.h"

namespace cfusim {

// Branch cost model:
//   none           taken costs mispredict_penalty, not-taken costs 0.
//   static         backward predicted taken, forward not-taken; a wrong
//                  direction costs mispredict_penalty, a right one 0.
//   dynamic        2-bit saturating counters (64 entries, initialized
//                  weakly-not-taken). Wrong direction costs
//                  mispredict_penalty; a correctly predicted taken branch
//                  still costs 1 (the target is only known at decode).
//   dynamic_target dynamic direction plus a tagged 64-entry target buffer;
//                  correct direction with a correct buffered target costs 0,
//                  a correct taken direction without one costs 1.
class PredictorSim {
 public:
  PredictorSim(Predictor kind, uint32_t mispredict_penalty);

  // Returns the penalty in cycles for this branch and updates state.
  uint32_t on_branch(uint32_t pc, uint32_t target, bool taken);

  void reset();
  uint64_t branches() const { return branches_; }
  uint64_t mispredicts() const { return mispredicts_; }

 private:
  static constexpr uint32_t kEntries = 64;

  Predictor kind_;
  uint32_t penalty_;
  uint64_t branches_ = 0;
  uint64_t mispredicts_ = 0;
  std::array<uint8_t, kEntries> counters_{};
  struct BtbEntry {
    bool valid = false;
    uint32_t pc = 0;
    uint32_t target = 0;
  };
  std::array<BtbEntry, kEntries> btb_{};
};

}  // namespace cfusim

#endif  // CFUSIM_PREDICTOR_H_
