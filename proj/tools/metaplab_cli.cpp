#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "commands.hpp"

using namespace metaplab;
using namespace metaplab::cli;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  bool dump = false;
  std::string out;
  std::optional<int> N, seed;
  std::optional<double> L, threshold;
  std::string signal, rep, window, op;
};

json signal_spec(const std::string& s) {
  if (s.rfind("file:", 0) == 0) return {{"kind", "file"}, {"path", s.substr(5)}};
  return {{"kind", s}};
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

std::string to_pointer(const std::string& path) {
  if (path.empty()) throw ValidationError("--set: empty path");
  if (path[0] == '/') return path;
  std::string ptr = "/" + path;
  std::replace(ptr.begin(), ptr.end(), '.', '/');
  return ptr;
}

// Defaults, then the config file, then shorthand flags, then --set assignments.
Config effective(const std::string& command, const Options& o) {
  json doc = command == "batch" ? json{{"runs", json::array()}, {"out", "batch"}} : default_config(command);
  std::string source = "config", text;
  if (!o.config_path.empty()) {
    text = io::read_text(o.config_path);
    source = o.config_path;
    json file;
    try {
      file = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(source + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError(source + ": top level must be an object");
    doc = merge(doc, file);
  }
  if (o.N) doc["grid"]["N"] = *o.N;
  if (o.L) doc["grid"]["L"] = *o.L;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.threshold) doc["cones"]["threshold"] = *o.threshold;
  if (!o.signal.empty()) doc["signal"] = signal_spec(o.signal);
  if (!o.window.empty()) doc["window"] = signal_spec(o.window);
  if (!o.rep.empty()) doc["rep"] = o.rep;
  if (!o.op.empty()) doc["operator"] = {{"kind", o.op}};
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects path=value, got '" + s + "'");
    try {
      doc[json::json_pointer(to_pointer(s.substr(0, eq)))] = parse_value(s.substr(eq + 1));
    } catch (const json::exception& e) {
      throw ValidationError("--set '" + s + "': " + e.what());
    }
  }
  return Config(std::move(doc), source, text);
}

void run_batch(const Config& c, const fs::path& out) {
  c.allow("", {"runs", "out"});
  const json& runs = c.at("/runs");
  if (!runs.is_array()) c.fail("/runs", "expected a list of runs");
  fs::create_directories(out);
  json manifest = json::array();
  for (size_t k = 0; k < runs.size(); ++k) {
    const std::string p = "/runs/" + std::to_string(k);
    c.allow(p, {"command", "out", "config"});
    const std::string cmd = c.string(p + "/command");
    if (std::find(command_names().begin(), command_names().end(), cmd) == command_names().end())
      c.fail(p + "/command", "unknown command '" + cmd + "'");
    const std::string dir = c.has(p + "/out") ? c.string(p + "/out") : cmd + "_" + std::to_string(k);
    json doc = default_config(cmd);
    if (c.has(p + "/config")) doc = merge(doc, c.at(p + "/config"));
    doc["out"] = dir;
    run(cmd, Config(std::move(doc), "batch run " + std::to_string(k)), out / dir);
    manifest.push_back({{"command", cmd}, {"out", dir}});
  }
  io::write_text(out / "batch.json", io::dump(json{{"runs", manifest}}));
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON configuration file");
  sub->add_option("--set", o.sets, "Override a config value: path=value (dotted path or JSON pointer)");
  sub->add_flag("--dump-config", o.dump, "Print the effective configuration and exit");
  sub->add_option("--out", o.out, "Output directory");
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--N", o.N, "Grid size");
  sub->add_option("--L", o.L, "Grid half-width");
  sub->add_option("--seed", o.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metaplectic Wigner distributions, quantizations, Gabor matrices and propagators"};
  app.require_subcommand(1);
  Options o;

  auto* wig = app.add_subcommand("wigner", "Time-frequency representation of a signal");
  auto* evo = app.add_subcommand("evolve", "Schrodinger propagation with conservation and residual tables");
  auto* gab = app.add_subcommand("gaborscan", "Gabor matrix envelope of an operator");
  auto* wfs = app.add_subcommand("wfs", "Wave-front set scan over phase-space cones");
  auto* bat = app.add_subcommand("batch", "Run a list of commands from one config");
  for (auto* s : {wig, evo, gab, wfs, bat}) add_common(s, o);
  for (auto* s : {wig, evo, gab, wfs}) add_grid(s, o);
  for (auto* s : {wig, evo, wfs}) s->add_option("--signal", o.signal, "Signal kind or file:<header>");
  for (auto* s : {wig, wfs}) s->add_option("--rep", o.rep, "Representation");
  for (auto* s : {wig, gab}) s->add_option("--window", o.window, "Window kind or file:<header>");
  gab->add_option("--operator", o.op, "Operator kind");
  wfs->add_option("--threshold", o.threshold, "Cone slope threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Config cfg = effective(command, o);
    if (o.dump) {
      std::cout << io::dump(cfg.doc());
      return 0;
    }
    const fs::path out = o.out.empty() ? fs::path(cfg.string("/out")) : fs::path(o.out);
    if (command == "batch") run_batch(cfg, out);
    else run(command, cfg, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
