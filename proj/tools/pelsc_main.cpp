// Copyright 2026 The PELS Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pelsc: assembles link microcode into SCM images and dumps them back.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pels/asm.hpp"
#include "pels/error.hpp"
#include "pels/isa.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot open '{}'", path));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int build(const std::string& input, const std::string& output, std::size_t scm_lines) {
  const auto prog = pels::assemble_text(read_text(input));
  if (scm_lines != 0) pels::validate_against_capacity(prog, scm_lines);
  const auto image = pels::pack_image(prog.commands);
  std::ofstream out(output, std::ios::binary);
  out.write(reinterpret_cast<const char*>(image.data()), static_cast<std::streamsize>(image.size()));
  if (!out) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot write '{}'", output));
  fmt::print("{}: {} commands, {} bytes\n", output, prog.size(), image.size());
  return 0;
}

int dump(const std::string& input, bool words) {
  pels::Program prog{pels::unpack_image(read_bytes(input))};
  if (words) {
    for (std::size_t i = 0; i < prog.size(); ++i) {
      fmt::print("{:3}: {:012x}\n", i, pels::encode(prog.commands[i]).bits);
    }
    return 0;
  }
  const auto text = pels::disassemble(prog);
  if (!text.empty()) fmt::print("{}\n", text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PELS microcode assembler"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::size_t scm_lines = 0;
  auto* build_cmd = app.add_subcommand("build", "Assemble a .pels source into an SCM image");
  build_cmd->add_option("input", input, "Source file")->required();
  build_cmd->add_option("-o,--output", output, "Image file")->required();
  build_cmd->add_option("--scm-lines", scm_lines, "Reject programs longer than this")
      ->check(CLI::Range(1, 256));

  bool words = false;
  auto* dump_cmd = app.add_subcommand("dump", "Disassemble an SCM image");
  dump_cmd->add_option("input", input, "Image file")->required();
  dump_cmd->add_flag("--words", words, "Print raw 48-bit words instead of source");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) return build(input, output, scm_lines);
    return dump(input, words);
  } catch (const pels::AsmError& e) {
    std::cerr << input << ":" << e.what() << "\n";
  } catch (const pels::Error& e) {
    std::cerr << input << ": " << pels::error_code_name(e.code()) << ": " << e.what() << "\n";
  }
  return 1;
}
