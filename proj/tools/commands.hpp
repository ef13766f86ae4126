#pragma once

// Subcommand wiring shared between cli.cpp and commands.cpp.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace sdlab::cli {

struct Common {
  std::string out = "-";
  std::string summary;
  std::string config;
  unsigned threads = 1;
  int precision = 128;
  std::uint64_t seed = 0;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Common> common;
  std::function<void(const Command&, std::ostream& out)> body;
};

/// Registers every subcommand on `app`.
std::vector<Command> register_commands(CLI::App& app);

/// `name=value` for every option of the subcommand, in declaration order.
std::string resolved_config(const CLI::App& sub);

/// An output file (or the fallback stream for "-") whose first line is a
/// comment carrying the resolved configuration.
class Artifact {
 public:
  Artifact(const std::string& path, std::ostream& fallback, std::string_view comment,
           const CLI::App& sub);
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

}  // namespace sdlab::cli
