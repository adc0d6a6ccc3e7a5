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

#ifndef CFUSIM_KERNELS_H_
#define CFUSIM_KERNELS_H_

#include <cstdint>
#include <vector>

namespace cfusim {

// int8 requantization primitives, bit-compatible with the reference
// integer kernels used by microcontroller inference runtimes.

// Saturating rounding doubling high multiply: trunc((a*b + nudge) / 2^31)
// with nudge 2^30 (or 1-2^30 for negative products); the single overflow
// case -2^31 * -2^31 saturates to 2^31-1.
int32_t srdhm(int32_t a, int32_t b);

// Rounding divide by power of two, round-half-away-from-zero.
// exponent must be in [0, 31].
int32_t rdbpot(int32_t x, int32_t exponent);

// Multiply by quantized multiplier: shift left by max(shift,0) (saturated
// to int32), srdhm by the multiplier, then rounding-divide by
// 2^max(-shift,0). shift must be in [-31, 8].
int32_t mbqm(int32_t x, int32_t quantized_multiplier, int32_t shift);

// One quantized conv/depthwise-conv layer description plus its
// per-output-channel requantization parameters. NHWC activations
// (single batch); filters are out-channel-major for conv
// (((oc*kh + ky)*kw + kx)*ic + c) and tap-major for depthwise
// (((ky*kw + kx)*out_ch + oc)).
struct LayerParams {
  bool depthwise = false;
  int32_t in_h = 0, in_w = 0, in_ch = 0;
  int32_t out_ch = 0;  // Depthwise: in_ch * depth_multiplier.
  int32_t kh = 1, kw = 1;
  int32_t stride = 1;
  bool same_pad = true;
  int32_t input_offset = 0;
  int32_t output_offset = 0;
  int32_t act_min = -128, act_max = 127;
  std::vector<int32_t> bias;
  std::vector<int32_t> mult;
  std::vector<int32_t> shift;

  int32_t depth_mult() const { return depthwise ? out_ch / in_ch : 1; }
  int32_t out_h() const { return out_dim(in_h, kh); }
  int32_t out_w() const { return out_dim(in_w, kw); }
  int32_t pad_top() const { return pad_before(in_h, kh); }
  int32_t pad_left() const { return pad_before(in_w, kw); }
  int64_t filter_count() const {
    return depthwise ? static_cast<int64_t>(kh) * kw * out_ch
                     : static_cast<int64_t>(out_ch) * kh * kw * in_ch;
  }
  int64_t input_count() const {
    return static_cast<int64_t>(in_h) * in_w * in_ch;
  }
  int64_t output_count() const {
    return static_cast<int64_t>(out_h()) * out_w() * out_ch;
  }
  bool is_pointwise() const {
    return !depthwise && kh == 1 && kw == 1 && stride == 1;
  }
  // Analytic multiply-accumulate count; border taps outside the input do
  // not contribute.
  int64_t macs() const;

 private:
  int32_t out_dim(int32_t in, int32_t k) const {
    if (same_pad) return (in + stride - 1) / stride;
    return (in - k) / stride + 1;
  }
  int32_t pad_before(int32_t in, int32_t k) const {
    if (!same_pad) return 0;
    int32_t total = (out_dim(in, k) - 1) * stride + k - in;
    if (total < 0) total = 0;
    return total / 2;
  }
};

// Computes one layer with exact 32-bit accumulation. Throws
// std::invalid_argument if in_ch*kh*kw > 32768 (accumulator headroom
// precondition) or if parameter vector lengths do not match out_ch.
// Dispatches on p.depthwise.
void reference_layer(const LayerParams& p, const int8_t* input,
                     const int8_t* filter, int8_t* output);

// Standard convolution (p.depthwise must be false).
void conv2d_int8(const LayerParams& p, const int8_t* input,
                 const int8_t* filter, int8_t* output);

// Depthwise convolution (p.depthwise must be true).
void depthwise_conv2d_int8(const LayerParams& p, const int8_t* input,
                           const int8_t* filter, int8_t* output);

// Loop-reduced matrix-vector path for kh = kw = 1, stride 1 convolutions;
// delegates to conv2d_int8 for every other shape. Bit-identical to
// conv2d_int8 in all cases.
void conv2d_1x1_specialized(const LayerParams& p, const int8_t* input,
                            const int8_t* filter, int8_t* output);

}  // namespace cfusim

#endif  // CFUSIM_KERNELS_H_
