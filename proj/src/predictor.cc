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

#include "cfusim/predictor.h"

namespace cfusim {

PredictorSim::PredictorSim(Predictor kind, uint32_t mispredict_penalty)
    : kind_(kind), penalty_(mispredict_penalty) {
  reset();
}

void PredictorSim::reset() {
  branches_ = mispredicts_ = 0;
  counters_.fill(1);  // Weakly not-taken.
  btb_.fill(BtbEntry{});
}

uint32_t PredictorSim::on_branch(uint32_t pc, uint32_t target, bool taken) {
  ++branches_;
  uint32_t idx = (pc >> 2) & (kEntries - 1);

  switch (kind_) {
    case Predictor::kNone:
      if (taken) {
        ++mispredicts_;
        return penalty_;
      }
      return 0;

    case Predictor::kStatic: {
      bool predicted = target < pc;
      if (predicted != taken) {
        ++mispredicts_;
        return penalty_;
      }
      return 0;
    }

    case Predictor::kDynamic: {
      bool predicted = counters_[idx] >= 2;
      if (taken && counters_[idx] < 3) ++counters_[idx];
      if (!taken && counters_[idx] > 0) --counters_[idx];
      if (predicted != taken) {
        ++mispredicts_;
        return penalty_;
      }
      return taken ? 1 : 0;  // Decode-stage redirect, no target buffer.
    }

    case Predictor::kDynamicTarget: {
      bool predicted = counters_[idx] >= 2;
      bool target_hit =
          btb_[idx].valid && btb_[idx].pc == pc && btb_[idx].target == target;
      if (taken && counters_[idx] < 3) ++counters_[idx];
      if (!taken && counters_[idx] > 0) --counters_[idx];
      if (taken) btb_[idx] = BtbEntry{true, pc, target};
      if (predicted != taken) {
        ++mispredicts_;
        return penalty_;
      }
      if (taken && !target_hit) return 1;
      return 0;
    }
  }
  return 0;
}

}  // namespace cfusim
