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

#include "cfusim/kernels.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cfusim {

int32_t srdhm(int32_t a, int32_t b) {
  if (a == std::numeric_limits<int32_t>::min() &&
      b == std::numeric_limits<int32_t>::min()) {
    return std::numeric_limits<int32_t>::max();
  }
  int64_t product = static_cast<int64_t>(a) * b;
  int64_t nudge = product >= 0 ? (1ll << 30) : (1 - (1ll << 30));
  return static_cast<int32_t>((product + nudge) / (1ll << 31));
}

int32_t rdbpot(int32_t x, int32_t exponent) {
  if (exponent < 0 || exponent > 31)
    throw std::invalid_argument("rdbpot exponent out of [0,31]");
  if (exponent == 0) return x;
  int32_t mask = static_cast<int32_t>((1ll << exponent) - 1);
  int32_t remainder = x & mask;
  int32_t threshold = (mask >> 1) + (x < 0 ? 1 : 0);
  return (x >> exponent) + (remainder > threshold ? 1 : 0);
}

int32_t mbqm(int32_t x, int32_t quantized_multiplier, int32_t shift) {
  if (shift < -31 || shift > 8)
    throw std::invalid_argument("mbqm shift out of [-31,8]");
  int32_t left = shift > 0 ? shift : 0;
  int32_t right = shift < 0 ? -shift : 0;
  int64_t shifted = static_cast<int64_t>(x) << left;
  int32_t sat = static_cast<int32_t>(
      std::clamp<int64_t>(shifted, std::numeric_limits<int32_t>::min(),
                          std::numeric_limits<int32_t>::max()));
  return rdbpot(srdhm(sat, quantized_multiplier), right);
}

int64_t LayerParams::macs() const {
  int64_t total = 0;
  int32_t oh = out_h(), ow = out_w();
  for (int32_t oy = 0; oy < oh; ++oy) {
    int32_t base_y = oy * stride - pad_top();
    int32_t valid_y = 0;
    for (int32_t ky = 0; ky < kh; ++ky) {
      int32_t iy = base_y + ky;
      if (iy >= 0 && iy < in_h) ++valid_y;
    }
    for (int32_t ox = 0; ox < ow; ++ox) {
      int32_t base_x = ox * stride - pad_left();
      int32_t valid_x = 0;
      for (int32_t kx = 0; kx < kw; ++kx) {
        int32_t ix = base_x + kx;
        if (ix >= 0 && ix < in_w) ++valid_x;
      }
      int64_t taps = static_cast<int64_t>(valid_y) * valid_x;
      total += taps * (depthwise ? out_ch : in_ch * out_ch);
    }
  }
  return total;
}

namespace {

void validate(const LayerParams& p) {
  if (static_cast<int64_t>(p.in_ch) * p.kh * p.kw > 32768)
    throw std::invalid_argument(
        "accumulator precondition: in_ch*kh*kw must be <= 32768");
  if (p.bias.size() != static_cast<size_t>(p.out_ch) ||
      p.mult.size() != static_cast<size_t>(p.out_ch) ||
      p.shift.size() != static_cast<size_t>(p.out_ch))
    throw std::invalid_argument("per-channel parameter length != out_ch");
  if (p.depthwise && p.out_ch % p.in_ch != 0)
    throw std::invalid_argument("depthwise out_ch must be multiple of in_ch");
}

int8_t postprocess(const LayerParams& p, int32_t acc, int32_t oc) {
  acc = static_cast<int32_t>(static_cast<uint32_t>(acc) +
                             static_cast<uint32_t>(p.bias[oc]));
  acc = mbqm(acc, p.mult[oc], p.shift[oc]);
  acc += p.output_offset;
  acc = std::clamp(acc, p.act_min, p.act_max);
  return static_cast<int8_t>(acc);
}

}  // namespace

void conv2d_int8(const LayerParams& p, const int8_t* input,
                 const int8_t* filter, int8_t* output) {
  if (p.depthwise)
    throw std::invalid_argument("conv2d_int8 called with depthwise params");
  validate(p);
  int32_t oh = p.out_h(), ow = p.out_w();
  for (int32_t oy = 0; oy < oh; ++oy) {
    for (int32_t ox = 0; ox < ow; ++ox) {
      for (int32_t oc = 0; oc < p.out_ch; ++oc) {
        int32_t acc = 0;
        for (int32_t ky = 0; ky < p.kh; ++ky) {
          int32_t iy = oy * p.stride - p.pad_top() + ky;
          if (iy < 0 || iy >= p.in_h) continue;
          for (int32_t kx = 0; kx < p.kw; ++kx) {
            int32_t ix = ox * p.stride - p.pad_left() + kx;
            if (ix < 0 || ix >= p.in_w) continue;
            for (int32_t ic = 0; ic < p.in_ch; ++ic) {
              int32_t in_v =
                  input[(iy * p.in_w + ix) * p.in_ch + ic] + p.input_offset;
              int32_t f_v =
                  filter[((oc * p.kh + ky) * p.kw + kx) * p.in_ch + ic];
              acc += in_v * f_v;
            }
          }
        }
        output[(oy * ow + ox) * p.out_ch + oc] = postprocess(p, acc, oc);
      }
    }
  }
}

void depthwise_conv2d_int8(const LayerParams& p, const int8_t* input,
                           const int8_t* filter, int8_t* output) {
  if (!p.depthwise)
    throw std::invalid_argument(
        "depthwise_conv2d_int8 called with standard conv params");
  validate(p);
  int32_t oh = p.out_h(), ow = p.out_w();
  int32_t dm = p.depth_mult();
  for (int32_t oy = 0; oy < oh; ++oy) {
    for (int32_t ox = 0; ox < ow; ++ox) {
      for (int32_t oc = 0; oc < p.out_ch; ++oc) {
        int32_t ic = oc / dm;
        int32_t acc = 0;
        for (int32_t ky = 0; ky < p.kh; ++ky) {
          int32_t iy = oy * p.stride - p.pad_top() + ky;
          if (iy < 0 || iy >= p.in_h) continue;
          for (int32_t kx = 0; kx < p.kw; ++kx) {
            int32_t ix = ox * p.stride - p.pad_left() + kx;
            if (ix < 0 || ix >= p.in_w) continue;
            int32_t in_v =
                input[(iy * p.in_w + ix) * p.in_ch + ic] + p.input_offset;
            int32_t f_v = filter[(ky * p.kw + kx) * p.out_ch + oc];
            acc += in_v * f_v;
          }
        }
        output[(oy * ow + ox) * p.out_ch + oc] = postprocess(p, acc, oc);
      }
    }
  }
}

void conv2d_1x1_specialized(const LayerParams& p, const int8_t* input,
                            const int8_t* filter, int8_t* output) {
  if (p.depthwise || p.kh != 1 || p.kw != 1 || p.stride != 1) {
    conv2d_int8(p, input, filter, output);
    return;
  }
  validate(p);
  int32_t positions = p.in_h * p.in_w;
  for (int32_t pos = 0; pos < positions; ++pos) {
    const int8_t* col = input + pos * p.in_ch;
    for (int32_t oc = 0; oc < p.out_ch; ++oc) {
      const int8_t* row = filter + oc * p.in_ch;
      int32_t acc = 0;
      for (int32_t ic = 0; ic < p.in_ch; ++ic)
        acc += (col[ic] + p.input_offset) * row[ic];
      output[pos * p.out_ch + oc] = postprocess(p, acc, oc);
    }
  }
}

void reference_layer(const LayerParams& p, const int8_t* input,
                     const int8_t* filter, int8_t* output) {
  if (p.depthwise)
    depthwise_conv2d_int8(p, input, filter, output);
  else
    conv2d_int8(p, input, filter, output);
}

}  // namespace cfusim
