#pragma once

#include <string>
#include <vector>

#include "metaplab/io.hpp"

namespace metaplab::cli {

using io::json;
namespace fs = std::filesystem;

// Validation failure located in the configuration; exit code 2.
struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};

// Effective configuration plus the text it was read from, for line-precise messages.
class Config {
 public:
  Config(json doc, std::string source = "config", std::string text = "");

  const json& doc() const { return doc_; }
  bool has(const std::string& ptr) const;
  const json& at(const std::string& ptr) const;
  double number(const std::string& ptr) const;
  int integer(const std::string& ptr) const;
  std::string string(const std::string& ptr) const;
  bool boolean(const std::string& ptr) const;
  void allow(const std::string& ptr, const std::vector<std::string>& keys) const;

  [[noreturn]] void fail(const std::string& ptr, const std::string& what) const;

  // Runs body and re-raises library validation errors with the location of ptr.
  template <typename F>
  auto guard(const std::string& ptr, F&& body) const -> decltype(body()) {
    try {
      return body();
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(ptr, e.what());
    }
  }

 private:
  json doc_;
  std::string source_, text_;
  std::string locate(const std::string& ptr) const;
};

const std::vector<std::string>& command_names();
json default_config(const std::string& command);

// Defaults, then the config document, then overrides (each a JSON merge patch).
json merge(const json& base, const json& patch);

// Writes every output of the command below out_dir (created if missing).
void run(const std::string& command, const Config& cfg, const fs::path& out_dir);

}  // namespace metaplab::cli
