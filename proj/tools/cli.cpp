#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "sdlab/error.hpp"

namespace sdlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Key/value pairs of a config file; one `key = value` per line, `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos,
            path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!key.empty() && !value.empty(), path + ":" + std::to_string(lineno) + ": empty key or value");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Splices config entries in front of the command-line flags; entries whose
// flag also appears on the command line are dropped so the flag wins.
void expand_config(std::vector<std::string>& args, const CLI::App& sub) {
  const std::string path = config_path(args);
  if (path.empty()) return;
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(path)) {
    require(key != "config" && sub.get_option_no_throw("--" + key) != nullptr,
            "unknown config key '" + key + "' for " + sub.get_name());
    if (!given_on_command_line(args, key)) extra.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sdlab: small-divisor and moving-target Diophantine experiments", "sdlab"};
  app.require_subcommand(1);
  std::vector<Command> commands = register_commands(app);

  if (args.empty()) {
    err << app.help();
    return kExitInvalid;
  }
  try {
    if (const CLI::App* sub = app.get_subcommand_no_throw(args[0])) expand_config(args, *sub);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  for (const auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      cmd.body(cmd, out);
      return kExitOk;
    } catch (const PrecisionError& e) {
      err << "precision floor: " << e.what() << '\n';
      return kExitPrecision;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  err << app.help();
  return kExitInvalid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace sdlab::cli
