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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pels/asm.hpp"
#include "pels/error.hpp"
#include "pels/isa.hpp"
#include "pels/report.hpp"
#include "pels/scenario.hpp"
#include "pels/simulator.hpp"

namespace py = pybind11;

namespace {

std::vector<std::uint64_t> to_words(const pels::Program& prog) {
  std::vector<std::uint64_t> words;
  words.reserve(prog.size());
  for (const auto& cmd : prog.commands) words.push_back(pels::encode(cmd).bits);
  return words;
}

pels::Program from_words(const std::vector<std::uint64_t>& words) {
  pels::Program prog;
  for (auto w : words) prog.commands.push_back(pels::decode(pels::EncodedCommand{w}));
  pels::validate_program(prog);
  return prog;
}

std::string run_scenario(const std::string& text, const std::string& base_dir,
                         std::optional<std::string> mode, std::optional<std::string> trace_level) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw pels::Error(pels::ErrorCode::kConfig, e.what());
  }
  const auto scenario = pels::parse_scenario(doc, base_dir);
  pels::RunOptions opts;
  if (mode) {
    if (*mode == "pels") opts.mode = pels::RunMode::kPels;
    else if (*mode == "baseline") opts.mode = pels::RunMode::kBaseline;
    else throw pels::Error(pels::ErrorCode::kConfig, "unknown mode '" + *mode + "'");
  }
  if (trace_level) opts.trace_level = pels::parse_trace_level(*trace_level);
  pels::SimReport report;
  {
    py::gil_scoped_release nogil;
    report = pels::run(scenario, opts);
  }
  auto out = pels::report_to_json(report);
  out["trace"] = report.trace;
  out["check_failures"] = pels::check_expectations(scenario, report);
  return out.dump();
}

std::string compare_reports(const std::string& pels_json, const std::string& baseline_json) {
  const auto a = pels::report_from_json(nlohmann::json::parse(pels_json));
  const auto b = pels::report_from_json(nlohmann::json::parse(baseline_json));
  return pels::comparison_to_json(pels::compare(a, b)).dump();
}

}  // namespace

PYBIND11_MODULE(_pels, m) {
  m.doc() = "Bindings for the PELS simulator core";

  // Kept alive for the interpreter's lifetime; the translator runs after
  // module init returns.
  static PyObject* error_type =
      py::exception<pels::Error>(m, "PelsError", PyExc_RuntimeError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pels::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(pels::error_code_name(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def(
      "encode",
      [](unsigned opcode, std::uint32_t field12, std::uint32_t operand) {
        const auto op = pels::opcode_from_nibble(opcode);
        if (!op) throw pels::Error(pels::ErrorCode::kUndefinedOpcode, "undefined opcode");
        return pels::encode(pels::Command(*op, field12, operand)).bits;
      },
      py::arg("opcode"), py::arg("field12"), py::arg("operand"));
  m.def(
      "decode",
      [](std::uint64_t word) {
        const auto cmd = pels::decode(pels::EncodedCommand{word});
        return py::make_tuple(static_cast<unsigned>(cmd.opcode()), cmd.field12(), cmd.operand());
      },
      py::arg("word"));
  m.def(
      "assemble", [](const std::string& text) { return to_words(pels::assemble_text(text)); },
      py::arg("text"));
  m.def(
      "disassemble", [](const std::vector<std::uint64_t>& words) {
        return pels::disassemble(from_words(words));
      },
      py::arg("words"));
  m.def(
      "pack_image",
      [](const std::vector<std::uint64_t>& words) {
        const auto prog = from_words(words);
        const auto bytes = pels::pack_image(prog.commands);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("words"));
  m.def(
      "unpack_image",
      [](const py::bytes& data) {
        const std::string raw = data;
        std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
        pels::Program prog;
        prog.commands = pels::unpack_image(bytes);
        return to_words(prog);
      },
      py::arg("data"));
  m.def("run_scenario", &run_scenario, py::arg("scenario_json"), py::arg("base_dir") = "",
        py::arg("mode") = py::none(), py::arg("trace_level") = py::none());
  m.def("compare", &compare_reports, py::arg("pels_report"), py::arg("baseline_report"));
}
