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

#ifndef CFUSIM_ISA_H_
#define CFUSIM_ISA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfusim {

// RV32IM plus custom-0 CFU instructions.
//
// CFU instructions use the R format on the custom-0 opcode (0b0001011).
// funct3 selects the operation group and funct7 the sub-operation within
// the group; a word decodes to the Cfu form iff (word & 0x7F) == 0x0B.
// Rendering is "cfu[funct3,funct7] rd, rs1, rs2"; assembler input uses
// either that form or "cfu funct3, funct7, rd, rs1, rs2".

inline constexpr uint32_t kCustom0Opcode = 0x0B;

enum class Op : uint8_t {
  kUnknown = 0,
  // R-type.
  kAdd, kSub, kSll, kSlt, kSltu, kXor, kSrl, kSra, kOr, kAnd,
  kMul, kMulh, kMulhsu, kMulhu, kDiv, kDivu, kRem, kRemu,
  // I-type.
  kAddi, kSlti, kSltiu, kXori, kOri, kAndi, kSlli, kSrli, kSrai,
  kLb, kLh, kLw, kLbu, kLhu,
  kJalr,
  // S-type.
  kSb, kSh, kSw,
  // B-type.
  kBeq, kBne, kBlt, kBge, kBltu, kBgeu,
  // U-type.
  kLui, kAuipc,
  // J-type.
  kJal,
  // System.
  kEcall, kEbreak, kFence,
  // Custom-0.
  kCfu,
};

struct Decoded {
  Op op = Op::kUnknown;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0;     // Sign-extended; B/J immediates are byte offsets.
  uint8_t funct3 = 0;  // Cfu only.
  uint8_t funct7 = 0;  // Cfu only.
  uint32_t raw = 0;
};

struct CfuFields {
  uint32_t funct3;
  uint32_t funct7;
  uint32_t rd;
  uint32_t rs1;
  uint32_t rs2;
};

// Throws std::invalid_argument naming the out-of-range field.
uint32_t encode_cfu(const CfuFields& f);

// Total: every 32-bit word decodes to exactly one instruction or kUnknown.
Decoded decode(uint32_t word);

// One text line per word, e.g. "lw        a5,8(sp)" or
// "cfu[1,0]  a5, a5, a3". Unknown words render as ".word 0x________".
std::string disassemble(uint32_t word);

// ABI register name (x2 -> "sp", x15 -> "a5").
const char* reg_name(uint32_t reg);

struct ProgramImage {
  uint32_t origin = 0;
  std::vector<uint32_t> words;
};

// Two-pass assembler. Supports labels, ".org ADDR", ".word VALUE", "#"
// comments, ABI and xN register names, and the pseudo-ops nop / li
// (addi-range immediates only) / j. Branch and jal targets are labels or
// numeric pc-relative byte offsets (the form the disassembler emits).
// Throws cfusim::ParseError (see error.h) with the offending line number.
ProgramImage assemble(const std::string& source, uint32_t default_origin = 0);

}  // namespace cfusim

#endif  // CFUSIM_ISA_H_
