// machine_io.hpp
// JSON (de)serialization of machines. The file format is a sparse edge
// list:
//   {"alphabet": ["0","1"],
//    "states": ["S0","S1"],
//    "edges": [{"from":"S0","symbol":"0","to":"S0","p":0.75}, ...]}
// The loader densifies the edges and enforces all machine invariants;
// the writer emits edges in (from, symbol, to) order so output is
// byte-stable across runs.

#pragma once

#include <filesystem>
#include <string>

#include "qem/machine.hpp"

namespace qem {

EpsilonMachine machine_from_json(const std::string& text);
std::string machine_to_json(const EpsilonMachine& m);

EpsilonMachine load_machine(const std::filesystem::path& path);
void save_machine(const EpsilonMachine& m, const std::filesystem::path& path);

}  // namespace qem
