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

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfusim/error.h"
#include "cfusim/isa.h"

namespace cfusim {

namespace {

struct Line {
  int number;
  std::string mnemonic;
  std::vector<std::string> operands;
  uint32_t address;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("asm line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<uint32_t> parse_reg(const std::string& tok) {
  for (uint32_t i = 0; i < 32; ++i) {
    if (tok == reg_name(i)) return i;
  }
  if (tok == "fp") return 8;
  if (tok.size() >= 2 && tok[0] == 'x') {
    char* end = nullptr;
    long v = std::strtol(tok.c_str() + 1, &end, 10);
    if (end && *end == '\0' && v >= 0 && v < 32) return static_cast<uint32_t>(v);
  }
  return std::nullopt;
}

uint32_t need_reg(const Line& ln, const std::string& tok) {
  auto r = parse_reg(trim(tok));
  if (!r) fail(ln.number, "bad register '" + tok + "'");
  return *r;
}

std::optional<int64_t> parse_int(const std::string& tok) {
  std::string t = trim(tok);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  long long v = std::strtoll(t.c_str(), &end, 0);
  if (end && *end == '\0') return v;
  // Large hex words such as 0xffffffff overflow strtoll's int32 range on
  // some libcs only when base-10; retry unsigned.
  unsigned long long u = std::strtoull(t.c_str(), &end, 0);
  if (end && *end == '\0') return static_cast<int64_t>(u);
  return std::nullopt;
}

int64_t need_int(const Line& ln, const std::string& tok) {
  auto v = parse_int(tok);
  if (!v) fail(ln.number, "bad immediate '" + tok + "'");
  return *v;
}

// Splits "8(sp)" into offset and register.
void parse_mem_operand(const Line& ln, const std::string& tok, int64_t* off,
                       uint32_t* reg) {
  std::string t = trim(tok);
  size_t lp = t.find('(');
  size_t rp = t.rfind(')');
  if (lp == std::string::npos || rp == std::string::npos || rp < lp)
    fail(ln.number, "expected offset(reg), got '" + tok + "'");
  std::string offs = trim(t.substr(0, lp));
  *off = offs.empty() ? 0 : need_int(ln, offs);
  *reg = need_reg(ln, t.substr(lp + 1, rp - lp - 1));
}

uint32_t enc_r(uint32_t f7, uint32_t rs2, uint32_t rs1, uint32_t f3,
               uint32_t rd, uint32_t opcode) {
  return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) |
         opcode;
}

uint32_t enc_i(const Line& ln, int64_t imm, uint32_t rs1, uint32_t f3,
               uint32_t rd, uint32_t opcode) {
  if (imm < -2048 || imm > 2047)
    fail(ln.number, "immediate " + std::to_string(imm) + " out of 12-bit range");
  return ((static_cast<uint32_t>(imm) & 0xFFF) << 20) | (rs1 << 15) |
         (f3 << 12) | (rd << 7) | opcode;
}

uint32_t enc_s(const Line& ln, int64_t imm, uint32_t rs2, uint32_t rs1,
               uint32_t f3) {
  if (imm < -2048 || imm > 2047)
    fail(ln.number, "store offset " + std::to_string(imm) + " out of range");
  uint32_t u = static_cast<uint32_t>(imm) & 0xFFF;
  return ((u >> 5) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) |
         ((u & 0x1F) << 7) | 0x23;
}

uint32_t enc_b(const Line& ln, int64_t off, uint32_t rs1, uint32_t rs2,
               uint32_t f3) {
  if (off % 2) fail(ln.number, "branch offset must be even");
  if (off < -4096 || off > 4094)
    fail(ln.number, "branch offset " + std::to_string(off) + " out of range");
  uint32_t u = static_cast<uint32_t>(off) & 0x1FFF;
  return (((u >> 12) & 1) << 31) | (((u >> 5) & 0x3F) << 25) | (rs2 << 20) |
         (rs1 << 15) | (f3 << 12) | (((u >> 1) & 0xF) << 8) |
         (((u >> 11) & 1) << 7) | 0x63;
}

uint32_t enc_j(const Line& ln, int64_t off, uint32_t rd) {
  if (off % 2) fail(ln.number, "jal offset must be even");
  if (off < -1048576 || off > 1048574)
    fail(ln.number, "jal offset " + std::to_string(off) + " out of range");
  uint32_t u = static_cast<uint32_t>(off) & 0x1FFFFF;
  return (((u >> 20) & 1) << 31) | (((u >> 1) & 0x3FF) << 21) |
         (((u >> 11) & 1) << 20) | (((u >> 12) & 0xFF) << 12) | (rd << 7) |
         0x6F;
}

struct OpSpec {
  enum Kind { kR, kIArith, kShift, kLoad, kStore, kBranch, kUpper, kBare } kind;
  uint32_t opcode, f3, f7;
};

const std::map<std::string, OpSpec>& op_table() {
  static const std::map<std::string, OpSpec> kTable = {
      {"add", {OpSpec::kR, 0x33, 0, 0x00}},
      {"sub", {OpSpec::kR, 0x33, 0, 0x20}},
      {"sll", {OpSpec::kR, 0x33, 1, 0x00}},
      {"slt", {OpSpec::kR, 0x33, 2, 0x00}},
      {"sltu", {OpSpec::kR, 0x33, 3, 0x00}},
      {"xor", {OpSpec::kR, 0x33, 4, 0x00}},
      {"srl", {OpSpec::kR, 0x33, 5, 0x00}},
      {"sra", {OpSpec::kR, 0x33, 5, 0x20}},
      {"or", {OpSpec::kR, 0x33, 6, 0x00}},
      {"and", {OpSpec::kR, 0x33, 7, 0x00}},
      {"mul", {OpSpec::kR, 0x33, 0, 0x01}},
      {"mulh", {OpSpec::kR, 0x33, 1, 0x01}},
      {"mulhsu", {OpSpec::kR, 0x33, 2, 0x01}},
      {"mulhu", {OpSpec::kR, 0x33, 3, 0x01}},
      {"div", {OpSpec::kR, 0x33, 4, 0x01}},
      {"divu", {OpSpec::kR, 0x33, 5, 0x01}},
      {"rem", {OpSpec::kR, 0x33, 6, 0x01}},
      {"remu", {OpSpec::kR, 0x33, 7, 0x01}},
      {"addi", {OpSpec::kIArith, 0x13, 0, 0}},
      {"slti", {OpSpec::kIArith, 0x13, 2, 0}},
      {"sltiu", {OpSpec::kIArith, 0x13, 3, 0}},
      {"xori", {OpSpec::kIArith, 0x13, 4, 0}},
      {"ori", {OpSpec::kIArith, 0x13, 6, 0}},
      {"andi", {OpSpec::kIArith, 0x13, 7, 0}},
      {"slli", {OpSpec::kShift, 0x13, 1, 0x00}},
      {"srli", {OpSpec::kShift, 0x13, 5, 0x00}},
      {"srai", {OpSpec::kShift, 0x13, 5, 0x20}},
      {"lb", {OpSpec::kLoad, 0x03, 0, 0}},
      {"lh", {OpSpec::kLoad, 0x03, 1, 0}},
      {"lw", {OpSpec::kLoad, 0x03, 2, 0}},
      {"lbu", {OpSpec::kLoad, 0x03, 4, 0}},
      {"lhu", {OpSpec::kLoad, 0x03, 5, 0}},
      {"jalr", {OpSpec::kLoad, 0x67, 0, 0}},
      {"sb", {OpSpec::kStore, 0x23, 0, 0}},
      {"sh", {OpSpec::kStore, 0x23, 1, 0}},
      {"sw", {OpSpec::kStore, 0x23, 2, 0}},
      {"beq", {OpSpec::kBranch, 0x63, 0, 0}},
      {"bne", {OpSpec::kBranch, 0x63, 1, 0}},
      {"blt", {OpSpec::kBranch, 0x63, 4, 0}},
      {"bge", {OpSpec::kBranch, 0x63, 5, 0}},
      {"bltu", {OpSpec::kBranch, 0x63, 6, 0}},
      {"bgeu", {OpSpec::kBranch, 0x63, 7, 0}},
      {"lui", {OpSpec::kUpper, 0x37, 0, 0}},
      {"auipc", {OpSpec::kUpper, 0x17, 0, 0}},
      {"ecall", {OpSpec::kBare, 0x73, 0, 0}},
      {"ebreak", {OpSpec::kBare, 0x73, 0, 1}},
      {"fence", {OpSpec::kBare, 0x0F, 0, 0}},
  };
  return kTable;
}

std::vector<std::string> split_operands(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cur = trim(cur);
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class Assembler {
 public:
  Assembler(const std::string& source, uint32_t default_origin)
      : source_(source), origin_(default_origin) {}

  ProgramImage run() {
    first_pass();
    second_pass();
    ProgramImage img;
    img.origin = origin_;
    img.words = words_;
    return img;
  }

 private:
  void first_pass() {
    std::istringstream in(source_);
    std::string raw;
    int number = 0;
    uint32_t addr = origin_;
    bool emitted = false;
    while (std::getline(in, raw)) {
      ++number;
      size_t hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      std::string text = trim(raw);
      // Peel leading labels.
      for (;;) {
        size_t colon = text.find(':');
        if (colon == std::string::npos) break;
        std::string head = trim(text.substr(0, colon));
        bool label_like = !head.empty();
        for (char c : head) {
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
              c != '.')
            label_like = false;
        }
        if (!label_like || head.find(' ') != std::string::npos) break;
        if (labels_.count(head))
          fail(number, "duplicate label '" + head + "'");
        labels_[head] = addr;
        text = trim(text.substr(colon + 1));
      }
      if (text.empty()) continue;

      Line ln;
      ln.number = number;
      size_t sp = text.find_first_of(" \t");
      ln.mnemonic = sp == std::string::npos ? text : text.substr(0, sp);
      std::string rest =
          sp == std::string::npos ? "" : trim(text.substr(sp + 1));
      // Normalize "cfu[f3,f7] rd, rs1, rs2" into plain operand form.
      if (ln.mnemonic.rfind("cfu[", 0) == 0) {
        size_t close = ln.mnemonic.find(']');
        if (close == std::string::npos) fail(number, "unterminated cfu[...]");
        std::string sel = ln.mnemonic.substr(4, close - 4);
        rest = sel + ", " + rest;
        ln.mnemonic = "cfu";
      }
      ln.operands = split_operands(rest);

      if (ln.mnemonic == ".org") {
        if (emitted) fail(number, ".org must precede all emitted words");
        if (ln.operands.size() != 1) fail(number, ".org takes one address");
        int64_t v = need_int(ln, ln.operands[0]);
        if (v < 0 || v % 4) fail(number, ".org address must be word aligned");
        origin_ = static_cast<uint32_t>(v);
        addr = origin_;
        continue;
      }
      emitted = true;
      ln.address = addr;
      addr += 4;
      lines_.push_back(ln);
    }
  }

  int64_t branch_target(const Line& ln, const std::string& tok) {
    auto it = labels_.find(trim(tok));
    if (it != labels_.end())
      return static_cast<int64_t>(it->second) -
             static_cast<int64_t>(ln.address);
    auto v = parse_int(tok);
    if (!v) fail(ln.number, "unknown label '" + tok + "'");
    return *v;  // Numeric operands are pc-relative byte offsets.
  }

  void second_pass() {
    for (const Line& ln : lines_) {
      words_.push_back(encode_line(ln));
    }
  }

  uint32_t encode_line(const Line& ln) {
    const std::string& m = ln.mnemonic;
    const auto& ops = ln.operands;
    auto want = [&](size_t n) {
      if (ops.size() != n)
        fail(ln.number, m + " expects " + std::to_string(n) + " operands");
    };

    if (m == ".word") {
      want(1);
      return static_cast<uint32_t>(need_int(ln, ops[0]));
    }
    if (m == "nop") {
      want(0);
      return enc_i(ln, 0, 0, 0, 0, 0x13);
    }
    if (m == "li") {
      want(2);
      int64_t v = need_int(ln, ops[1]);
      if (v < -2048 || v > 2047)
        fail(ln.number, "li immediate out of addi range");
      return enc_i(ln, v, 0, 0, need_reg(ln, ops[0]), 0x13);
    }
    if (m == "j") {
      want(1);
      return enc_j(ln, branch_target(ln, ops[0]), 0);
    }
    if (m == "jal") {
      want(2);
      return enc_j(ln, branch_target(ln, ops[1]), need_reg(ln, ops[0]));
    }
    if (m == "cfu") {
      want(5);
      CfuFields f;
      f.funct3 = static_cast<uint32_t>(need_int(ln, ops[0]));
      f.funct7 = static_cast<uint32_t>(need_int(ln, ops[1]));
      f.rd = need_reg(ln, ops[2]);
      f.rs1 = need_reg(ln, ops[3]);
      f.rs2 = need_reg(ln, ops[4]);
      if (f.funct3 > 7) fail(ln.number, "cfu funct3 out of range");
      if (f.funct7 > 127) fail(ln.number, "cfu funct7 out of range");
      return encode_cfu(f);
    }

    auto it = op_table().find(m);
    if (it == op_table().end()) fail(ln.number, "unknown mnemonic '" + m + "'");
    const OpSpec& spec = it->second;
    switch (spec.kind) {
      case OpSpec::kR: {
        want(3);
        return enc_r(spec.f7, need_reg(ln, ops[2]), need_reg(ln, ops[1]),
                     spec.f3, need_reg(ln, ops[0]), spec.opcode);
      }
      case OpSpec::kIArith: {
        want(3);
        return enc_i(ln, need_int(ln, ops[2]), need_reg(ln, ops[1]), spec.f3,
                     need_reg(ln, ops[0]), spec.opcode);
      }
      case OpSpec::kShift: {
        want(3);
        int64_t sh = need_int(ln, ops[2]);
        if (sh < 0 || sh > 31) fail(ln.number, "shift amount out of range");
        return enc_r(spec.f7, static_cast<uint32_t>(sh),
                     need_reg(ln, ops[1]), spec.f3, need_reg(ln, ops[0]),
                     spec.opcode);
      }
      case OpSpec::kLoad: {  // Also jalr, same offset(reg) syntax.
        want(2);
        int64_t off;
        uint32_t base;
        parse_mem_operand(ln, ops[1], &off, &base);
        return enc_i(ln, off, base, spec.f3, need_reg(ln, ops[0]),
                     spec.opcode);
      }
      case OpSpec::kStore: {
        want(2);
        int64_t off;
        uint32_t base;
        parse_mem_operand(ln, ops[1], &off, &base);
        return enc_s(ln, off, need_reg(ln, ops[0]), base, spec.f3);
      }
      case OpSpec::kBranch: {
        want(3);
        return enc_b(ln, branch_target(ln, ops[2]), need_reg(ln, ops[0]),
                     need_reg(ln, ops[1]), spec.f3);
      }
      case OpSpec::kUpper: {
        want(2);
        int64_t v = need_int(ln, ops[1]);
        if (v < 0 || v > 0xFFFFF)
          fail(ln.number, "upper immediate out of 20-bit range");
        return (static_cast<uint32_t>(v) << 12) |
               (need_reg(ln, ops[0]) << 7) | spec.opcode;
      }
      case OpSpec::kBare: {
        want(0);
        if (m == "ecall") return 0x00000073;
        if (m == "ebreak") return 0x00100073;
        return 0x0000000F;  // fence
      }
    }
    fail(ln.number, "unknown mnemonic '" + m + "'");
  }

  std::string source_;
  uint32_t origin_;
  std::map<std::string, uint32_t> labels_;
  std::vector<Line> lines_;
  std::vector<uint32_t> words_;
};

}  // namespace

ProgramImage assemble(const std::string& source, uint32_t default_origin) {
  return Assembler(source, default_origin).run();
}

}  // namespace cfusim
