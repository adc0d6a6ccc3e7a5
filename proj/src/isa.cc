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

#include "cfusim/isa.h"

#include <cstdio>
#include <stdexcept>

namespace cfusim {

namespace {

int32_t sign_extend(uint32_t value, int bits) {
  uint32_t mask = 1u << (bits - 1);
  return static_cast<int32_t>((value ^ mask) - mask);
}

uint32_t bits(uint32_t word, int hi, int lo) {
  return (word >> lo) & ((1u << (hi - lo + 1)) - 1);
}

}  // namespace

const char* reg_name(uint32_t reg) {
  static const char* kNames[32] = {
      "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0",
      "a1",   "a2", "a3", "a4", "a5", "a6", "a7", "s2", "s3", "s4", "s5",
      "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
  return kNames[reg & 31];
}

uint32_t encode_cfu(const CfuFields& f) {
  if (f.funct3 > 7) throw std::invalid_argument("funct3 out of range (0..7)");
  if (f.funct7 > 127)
    throw std::invalid_argument("funct7 out of range (0..127)");
  if (f.rd > 31) throw std::invalid_argument("rd out of range (0..31)");
  if (f.rs1 > 31) throw std::invalid_argument("rs1 out of range (0..31)");
  if (f.rs2 > 31) throw std::invalid_argument("rs2 out of range (0..31)");
  return (f.funct7 << 25) | (f.rs2 << 20) | (f.rs1 << 15) | (f.funct3 << 12) |
         (f.rd << 7) | kCustom0Opcode;
}

Decoded decode(uint32_t word) {
  Decoded d;
  d.raw = word;
  uint32_t opcode = word & 0x7F;
  uint32_t rd = bits(word, 11, 7);
  uint32_t funct3 = bits(word, 14, 12);
  uint32_t rs1 = bits(word, 19, 15);
  uint32_t rs2 = bits(word, 24, 20);
  uint32_t funct7 = bits(word, 31, 25);

  auto r_type = [&](Op op) {
    d.op = op;
    d.rd = rd;
    d.rs1 = rs1;
    d.rs2 = rs2;
  };
  auto i_type = [&](Op op) {
    d.op = op;
    d.rd = rd;
    d.rs1 = rs1;
    d.imm = sign_extend(bits(word, 31, 20), 12);
  };

  switch (opcode) {
    case kCustom0Opcode:
      d.op = Op::kCfu;
      d.rd = rd;
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.funct3 = funct3;
      d.funct7 = funct7;
      return d;
    case 0x33:  // OP
      if (funct7 == 0x01) {
        static const Op kMulOps[8] = {Op::kMul,  Op::kMulh, Op::kMulhsu,
                                      Op::kMulhu, Op::kDiv,  Op::kDivu,
                                      Op::kRem,  Op::kRemu};
        r_type(kMulOps[funct3]);
        return d;
      }
      if (funct7 == 0x00) {
        static const Op kOps[8] = {Op::kAdd, Op::kSll, Op::kSlt, Op::kSltu,
                                   Op::kXor, Op::kSrl, Op::kOr,  Op::kAnd};
        r_type(kOps[funct3]);
        return d;
      }
      if (funct7 == 0x20 && funct3 == 0) {
        r_type(Op::kSub);
        return d;
      }
      if (funct7 == 0x20 && funct3 == 5) {
        r_type(Op::kSra);
        return d;
      }
      return d;
    case 0x13:  // OP-IMM
      switch (funct3) {
        case 0: i_type(Op::kAddi); return d;
        case 2: i_type(Op::kSlti); return d;
        case 3: i_type(Op::kSltiu); return d;
        case 4: i_type(Op::kXori); return d;
        case 6: i_type(Op::kOri); return d;
        case 7: i_type(Op::kAndi); return d;
        case 1:
          if (funct7 == 0x00) {
            d.op = Op::kSlli;
            d.rd = rd;
            d.rs1 = rs1;
            d.imm = static_cast<int32_t>(rs2);
            return d;
          }
          return d;
        case 5:
          if (funct7 == 0x00 || funct7 == 0x20) {
            d.op = funct7 ? Op::kSrai : Op::kSrli;
            d.rd = rd;
            d.rs1 = rs1;
            d.imm = static_cast<int32_t>(rs2);
            return d;
          }
          return d;
      }
      return d;
    case 0x03:  // LOAD
      switch (funct3) {
        case 0: i_type(Op::kLb); return d;
        case 1: i_type(Op::kLh); return d;
        case 2: i_type(Op::kLw); return d;
        case 4: i_type(Op::kLbu); return d;
        case 5: i_type(Op::kLhu); return d;
      }
      return d;
    case 0x23:  // STORE
      if (funct3 <= 2) {
        d.op = funct3 == 0 ? Op::kSb : (funct3 == 1 ? Op::kSh : Op::kSw);
        d.rs1 = rs1;
        d.rs2 = rs2;
        d.imm =
            sign_extend((bits(word, 31, 25) << 5) | bits(word, 11, 7), 12);
      }
      return d;
    case 0x63: {  // BRANCH
      static const Op kBr[8] = {Op::kBeq,  Op::kBne,  Op::kUnknown,
                                Op::kUnknown, Op::kBlt, Op::kBge,
                                Op::kBltu, Op::kBgeu};
      if (kBr[funct3] == Op::kUnknown) return d;
      d.op = kBr[funct3];
      d.rs1 = rs1;
      d.rs2 = rs2;
      uint32_t imm = (bits(word, 31, 31) << 12) | (bits(word, 7, 7) << 11) |
                     (bits(word, 30, 25) << 5) | (bits(word, 11, 8) << 1);
      d.imm = sign_extend(imm, 13);
      return d;
    }
    case 0x37:
      d.op = Op::kLui;
      d.rd = rd;
      d.imm = static_cast<int32_t>(word & 0xFFFFF000u);
      return d;
    case 0x17:
      d.op = Op::kAuipc;
      d.rd = rd;
      d.imm = static_cast<int32_t>(word & 0xFFFFF000u);
      return d;
    case 0x6F: {  // JAL
      d.op = Op::kJal;
      d.rd = rd;
      uint32_t imm = (bits(word, 31, 31) << 20) | (bits(word, 19, 12) << 12) |
                     (bits(word, 20, 20) << 11) | (bits(word, 30, 21) << 1);
      d.imm = sign_extend(imm, 21);
      return d;
    }
    case 0x67:  // JALR
      if (funct3 == 0) i_type(Op::kJalr);
      return d;
    case 0x73:  // SYSTEM
      if (funct3 == 0 && rd == 0 && rs1 == 0) {
        uint32_t imm12 = bits(word, 31, 20);
        if (imm12 == 0 && funct7 == 0) d.op = Op::kEcall;
        if (imm12 == 1) d.op = Op::kEbreak;
      }
      return d;
    case 0x0F:  // MISC-MEM
      if (funct3 == 0) d.op = Op::kFence;
      return d;
    default:
      return d;
  }
}

namespace {

const char* mnemonic(Op op) {
  switch (op) {
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kSll: return "sll";
    case Op::kSlt: return "slt";
    case Op::kSltu: return "sltu";
    case Op::kXor: return "xor";
    case Op::kSrl: return "srl";
    case Op::kSra: return "sra";
    case Op::kOr: return "or";
    case Op::kAnd: return "and";
    case Op::kMul: return "mul";
    case Op::kMulh: return "mulh";
    case Op::kMulhsu: return "mulhsu";
    case Op::kMulhu: return "mulhu";
    case Op::kDiv: return "div";
    case Op::kDivu: return "divu";
    case Op::kRem: return "rem";
    case Op::kRemu: return "remu";
    case Op::kAddi: return "addi";
    case Op::kSlti: return "slti";
    case Op::kSltiu: return "sltiu";
    case Op::kXori: return "xori";
    case Op::kOri: return "ori";
    case Op::kAndi: return "andi";
    case Op::kSlli: return "slli";
    case Op::kSrli: return "srli";
    case Op::kSrai: return "srai";
    case Op::kLb: return "lb";
    case Op::kLh: return "lh";
    case Op::kLw: return "lw";
    case Op::kLbu: return "lbu";
    case Op::kLhu: return "lhu";
    case Op::kJalr: return "jalr";
    case Op::kSb: return "sb";
    case Op::kSh: return "sh";
    case Op::kSw: return "sw";
    case Op::kBeq: return "beq";
    case Op::kBne: return "bne";
    case Op::kBlt: return "blt";
    case Op::kBge: return "bge";
    case Op::kBltu: return "bltu";
    case Op::kBgeu: return "bgeu";
    case Op::kLui: return "lui";
    case Op::kAuipc: return "auipc";
    case Op::kJal: return "jal";
    case Op::kEcall: return "ecall";
    case Op::kEbreak: return "ebreak";
    case Op::kFence: return "fence";
    default: return "?";
  }
}

std::string pad_mnemonic(const std::string& m) {
  std::string out = m;
  while (out.size() < 10) out.push_back(' ');
  return out;
}

}  // namespace

std::string disassemble(uint32_t word) {
  Decoded d = decode(word);
  char buf[64];
  switch (d.op) {
    case Op::kUnknown:
      std::snprintf(buf, sizeof(buf), ".word 0x%08x", word);
      return buf;
    case Op::kCfu: {
      char m[16];
      std::snprintf(m, sizeof(m), "cfu[%u,%u]", d.funct3, d.funct7);
      std::snprintf(buf, sizeof(buf), "%s%s, %s, %s", pad_mnemonic(m).c_str(),
                    reg_name(d.rd), reg_name(d.rs1), reg_name(d.rs2));
      return buf;
    }
    case Op::kAdd: case Op::kSub: case Op::kSll: case Op::kSlt:
    case Op::kSltu: case Op::kXor: case Op::kSrl: case Op::kSra:
    case Op::kOr: case Op::kAnd: case Op::kMul: case Op::kMulh:
    case Op::kMulhsu: case Op::kMulhu: case Op::kDiv: case Op::kDivu:
    case Op::kRem: case Op::kRemu:
      std::snprintf(buf, sizeof(buf), "%s%s,%s,%s",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rd),
                    reg_name(d.rs1), reg_name(d.rs2));
      return buf;
    case Op::kAddi: case Op::kSlti: case Op::kSltiu: case Op::kXori:
    case Op::kOri: case Op::kAndi: case Op::kSlli: case Op::kSrli:
    case Op::kSrai:
      std::snprintf(buf, sizeof(buf), "%s%s,%s,%d",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rd),
                    reg_name(d.rs1), d.imm);
      return buf;
    case Op::kLb: case Op::kLh: case Op::kLw: case Op::kLbu: case Op::kLhu:
    case Op::kJalr:
      std::snprintf(buf, sizeof(buf), "%s%s,%d(%s)",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rd),
                    d.imm, reg_name(d.rs1));
      return buf;
    case Op::kSb: case Op::kSh: case Op::kSw:
      std::snprintf(buf, sizeof(buf), "%s%s,%d(%s)",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rs2),
                    d.imm, reg_name(d.rs1));
      return buf;
    case Op::kBeq: case Op::kBne: case Op::kBlt: case Op::kBge:
    case Op::kBltu: case Op::kBgeu:
      std::snprintf(buf, sizeof(buf), "%s%s,%s,%d",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rs1),
                    reg_name(d.rs2), d.imm);
      return buf;
    case Op::kLui: case Op::kAuipc:
      std::snprintf(buf, sizeof(buf), "%s%s,0x%x",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rd),
                    static_cast<uint32_t>(d.imm) >> 12);
      return buf;
    case Op::kJal:
      std::snprintf(buf, sizeof(buf), "%s%s,%d",
                    pad_mnemonic(mnemonic(d.op)).c_str(), reg_name(d.rd),
                    d.imm);
      return buf;
    case Op::kEcall: return "ecall";
    case Op::kEbreak: return "ebreak";
    case Op::kFence: return "fence";
  }
  return ".word 0x00000000";
}

}  // namespace cfusim
