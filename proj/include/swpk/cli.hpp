#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace swpk {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

// Resolved configuration: every known key with its value as text. Keys the
// user never set keep their defaults; an empty value means "unset".
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;  // ParseError when unset
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
};

// Layers, lowest first: defaults, config file text, key=value overrides.
// Unqualified override keys go to params.*. ParseError on unknown keys.
RunConfig make_run_config(const std::string& command, const std::string& file_text,
                          const std::vector<std::pair<std::string, std::string>>& overrides);

// Flat key=value rendering of the resolved config; feeding it back reproduces the run.
std::string config_text(const RunConfig& cfg);

int cmd_check_params(const RunConfig& cfg, std::ostream& out);
int cmd_apply(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_hardy(const RunConfig& cfg, std::ostream& out);

// Dispatches on cfg.command and maps library errors to exit codes.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace swpk
