#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "metaplab/expr.hpp"

namespace metaplab::cli {

Config::Config(json doc, std::string source, std::string text)
    : doc_(std::move(doc)), source_(std::move(source)), text_(std::move(text)) {}

bool Config::has(const std::string& ptr) const {
  const json::json_pointer p(ptr);
  return doc_.contains(p) && !doc_.at(p).is_null();
}

const json& Config::at(const std::string& ptr) const {
  if (!has(ptr)) fail(ptr, "missing required value");
  return doc_.at(json::json_pointer(ptr));
}

double Config::number(const std::string& ptr) const {
  const json& j = at(ptr);
  if (!j.is_number()) fail(ptr, "expected a number, found " + j.dump());
  return j.get<double>();
}

int Config::integer(const std::string& ptr) const {
  const json& j = at(ptr);
  if (!j.is_number_integer()) fail(ptr, "expected an integer, found " + j.dump());
  return j.get<int>();
}

std::string Config::string(const std::string& ptr) const {
  const json& j = at(ptr);
  if (!j.is_string()) fail(ptr, "expected a string, found " + j.dump());
  return j.get<std::string>();
}

bool Config::boolean(const std::string& ptr) const {
  const json& j = at(ptr);
  if (!j.is_boolean()) fail(ptr, "expected true or false, found " + j.dump());
  return j.get<bool>();
}

void Config::allow(const std::string& ptr, const std::vector<std::string>& keys) const {
  const json& j = ptr.empty() ? doc_ : at(ptr);
  if (!j.is_object()) fail(ptr, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      fail(ptr + "/" + it.key(), "unknown key '" + it.key() + "'");
}

std::string Config::locate(const std::string& ptr) const {
  if (text_.empty()) return source_;
  size_t pos = 0;
  bool found = false;
  std::stringstream ss(ptr);
  std::string token;
  while (std::getline(ss, token, '/')) {
    if (token.empty()) continue;
    const size_t hit = text_.find("\"" + token + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + token.size() + 2;
    found = true;
  }
  if (!found) return source_;
  const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
  return source_ + ":" + std::to_string(line);
}

void Config::fail(const std::string& ptr, const std::string& what) const {
  throw ConfigError(locate(ptr) + ": " + (ptr.empty() ? "/" : ptr) + ": " + what);
}

json merge(const json& base, const json& patch) {
  json out = base;
  out.merge_patch(patch);
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"wigner", "evolve", "gaborscan", "wfs"};
  return names;
}

json default_config(const std::string& command) {
  const json grid = {{"N", 256}, {"L", 8.0}};
  const json gauss = {{"kind", "gaussian"}};
  if (command == "wigner")
    return {{"grid", grid}, {"signal", gauss}, {"second", nullptr}, {"rep", "tau:0.5"},
            {"window", gauss},  {"seed", 0},     {"out", "wigner"}};
  if (command == "evolve")
    return {{"grid", grid},
            {"signal", gauss},
            {"hamiltonian", {{"preset", "free"}, {"omega", 1.0}, {"A", 0.0}, {"B", 0.0}, {"C", 0.0},
                             {"perturbation", nullptr}}},
            {"times", {0.0, 0.02, 0.05, 0.1}},
            {"tau", 0.5},
            {"seed", 0},
            {"out", "evolve"}};
  if (command == "gaborscan")
    return {{"grid", grid},
            {"operator", {{"kind", "fourier"}}},
            {"window", nullptr},
            {"lattice", {{"gen", io::matrix_to_json(Mat::Identity(2, 2))}, {"radius", 6.0}}},
            {"chi", nullptr},
            {"qs", {{1.0, 0.0}}},
            {"op_norm", 0.0},
            {"seed", 0},
            {"out", "gaborscan"}};
  if (command == "wfs") {
    const WaveFrontConfig c;
    return {{"grid", grid},
            {"signal", gauss},
            {"rep", "wigner"},
            {"cones", {{"bins", c.bins}, {"r0", c.r0}, {"nmax", c.nmax}, {"threshold", c.threshold},
                       {"mass_floor", c.mass_floor}, {"min_decades", c.min_decades},
                       {"wigner_extent", c.wigner_extent}}},
            {"seed", 0},
            {"out", "wfs"}};
  }
  throw ValidationError("unknown command '" + command + "'");
}

namespace {

Grid make_grid(const Config& c, const std::string& ptr) {
  c.allow(ptr, {"N", "L"});
  const int N = c.integer(ptr + "/N");
  return c.guard(ptr, [&] { return c.has(ptr + "/L") ? Grid::make(N, c.number(ptr + "/L")) : Grid::self_dual(N); });
}

Signal make_signal(const Config& c, const std::string& ptr, const Grid& g) {
  const json& spec = c.at(ptr);
  if (spec.is_string()) {
    Config sub(json{{"s", {{"kind", spec}}}});
    return make_signal(sub, "/s", g);
  }
  const std::string kind = c.string(ptr + "/kind");
  auto opt = [&](const std::string& key, double fallback) {
    return c.has(ptr + "/" + key) ? c.number(ptr + "/" + key) : fallback;
  };
  return c.guard(ptr, [&]() -> Signal {
    if (kind == "gaussian") {
      c.allow(ptr, {"kind", "x0", "xi0", "width"});
      return gaussian_signal(g, opt("x0", 0), opt("xi0", 0), opt("width", 1));
    }
    if (kind == "hermite") {
      c.allow(ptr, {"kind", "n"});
      return hermite_signal(g, c.has(ptr + "/n") ? c.integer(ptr + "/n") : 0);
    }
    if (kind == "sign-gaussian") {
      c.allow(ptr, {"kind"});
      return sign_gaussian_signal(g);
    }
    if (kind == "two-bump") {
      c.allow(ptr, {"kind", "sep"});
      return two_bump_signal(g, opt("sep", 2.0));
    }
    if (kind == "ghost") {
      c.allow(ptr, {"kind", "x0", "xi0"});
      Signal s = gaussian_signal(g, opt("x0", 4.5), 0);
      s.v += gaussian_signal(g, 0, opt("xi0", 4.5)).v;
      return s;
    }
    if (kind == "noise") {
      c.allow(ptr, {"kind", "nmax"});
      std::mt19937_64 rng(static_cast<std::uint64_t>(c.has("/seed") ? c.integer("/seed") : 0));
      return random_hermite_signal(g, rng, c.has(ptr + "/nmax") ? c.integer(ptr + "/nmax") : 8);
    }
    if (kind == "file") {
      c.allow(ptr, {"kind", "path"});
      Signal s = io::load_signal(c.string(ptr + "/path"));
      if (!s.grid.same(g)) throw ShapeError("signal file grid differs from the configured grid");
      return s;
    }
    c.fail(ptr + "/kind", "unknown signal kind '" + kind + "'");
  });
}

std::vector<double> parse_numbers(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("malformed number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw ValidationError("malformed number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

CovariantForm parse_covariant(const std::string& body) {
  const auto v = parse_numbers(body);
  if (v.size() != 3) throw ValidationError("covariant representation needs a11,a13,a21");
  return CovariantForm::make(Mat::Constant(1, 1, v[0]), Mat::Constant(1, 1, v[1]), Mat::Constant(1, 1, v[2]));
}

std::pair<std::string, std::string> split_rep(const std::string& rep) {
  const auto colon = rep.find(':');
  if (colon == std::string::npos) return {rep, ""};
  return {rep.substr(0, colon), rep.substr(colon + 1)};
}

void add_grid(json& report, const Grid& g) { report["grid"] = io::to_json(g); }

void write_report(const fs::path& dir, const json& report) { io::write_text(dir / "report.json", io::dump(report)); }

void cmd_wigner(const Config& c, const fs::path& out) {
  c.allow("", {"grid", "signal", "second", "rep", "window", "seed", "out"});
  const Grid g = make_grid(c, "/grid");
  const Signal f = make_signal(c, "/signal", g);
  const Signal h = c.has("/second") ? make_signal(c, "/second", g) : f;
  const std::string rep = c.string("/rep");
  const auto [name, arg] = split_rep(rep);
  const Field F = c.guard("/rep", [&]() -> Field {
    if (name == "wigner" && arg.empty()) return wigner_cross(f, h);
    if (name == "tau") {
      const auto v = parse_numbers(arg);
      if (v.size() != 1) throw ValidationError("tau representation needs one value");
      return tau_wigner(f, h, v[0]);
    }
    if (name == "stft" && arg.empty()) return stft(f, make_signal(c, "/window", g));
    if (name == "covariant") return wigner_A_covariant(parse_covariant(arg), f, h);
    if (name == "matrix") return wigner_A(io::matrix_from_json(json::parse(io::read_text(arg))), f, h);
    c.fail("/rep", "unknown representation '" + rep + "'");
  });
  const Signal& second = name == "stft" ? make_signal(c, "/window", g) : h;

  io::save_field(F, out / "field.json");
  io::write_field_csv(F, out / "field.csv");

  Eigen::Index bi = 0, bj = 0;
  const double mx = F.v.cwiseAbs().maxCoeff(&bi, &bj);
  const double prod = f.norm() * second.norm();
  json r;
  r["command"] = "wigner";
  r["rep"] = rep;
  add_grid(r, g);
  r["norm_f"] = f.norm();
  r["norm_g"] = second.norm();
  r["field_norm"] = F.norm();
  r["moyal_rel_error"] = std::abs(F.norm() - prod) / prod;
  r["max_abs"] = mx;
  r["argmax"] = {{"x", F.g0.x(static_cast<int>(bi))}, {"xi", F.g1.x(static_cast<int>(bj))}};
  const cd origin = F.v(F.g0.N / 2, F.g1.N / 2);
  r["origin"] = {{"re", origin.real()}, {"im", origin.imag()}};
  r["interpolated"] = F.interpolated;
  r["files"] = {"field.json", "field.bin", "field.csv"};
  write_report(out, r);
}

Hamiltonian make_hamiltonian(const Config& c, const Grid& g) {
  const std::string p = "/hamiltonian";
  c.allow(p, {"preset", "omega", "A", "B", "C", "perturbation"});
  const std::string preset = c.string(p + "/preset");
  Hamiltonian H;
  H.quad = c.guard(p, [&]() -> QuadraticHamiltonian {
    if (preset == "free") return QuadraticHamiltonian::free_particle();
    if (preset == "oscillator") return QuadraticHamiltonian::harmonic_oscillator(c.number(p + "/omega"));
    if (preset == "custom")
      return QuadraticHamiltonian::make(Mat::Constant(1, 1, c.number(p + "/A")), Mat::Constant(1, 1, c.number(p + "/B")),
                                        Mat::Constant(1, 1, c.number(p + "/C")));
    c.fail(p + "/preset", "unknown preset '" + preset + "' (free, oscillator, custom)");
  });
  if (c.has(p + "/perturbation")) {
    const std::string text = c.string(p + "/perturbation");
    const Expr e = c.guard(p + "/perturbation", [&] { return Expr::parse(text); });
    if (e.uses("u") || e.uses("v")) c.fail(p + "/perturbation", "the perturbation depends on x and xi only");
    H.perturbation = symbol_field([&e](double x, double xi) { return cd(e(x, xi)); }, g);
  }
  return H;
}

void cmd_evolve(const Config& c, const fs::path& out) {
  c.allow("", {"grid", "signal", "hamiltonian", "times", "tau", "seed", "out"});
  const Grid g = make_grid(c, "/grid");
  const Signal u0 = make_signal(c, "/signal", g);
  const Hamiltonian H = make_hamiltonian(c, g);
  const json& times = c.at("/times");
  if (!times.is_array() || times.empty()) c.fail("/times", "expected a non-empty list of times");
  std::vector<double> ts;
  for (size_t k = 0; k < times.size(); ++k) {
    if (!times[k].is_number()) c.fail("/times/" + std::to_string(k), "expected a number");
    ts.push_back(times[k].get<double>());
  }
  const double tau = c.number("/tau");
  if (!(tau >= 0 && tau <= 1)) c.fail("/tau", "tau must lie in [0, 1]");

  std::optional<Propagator> P;
  if (H.perturbation) P.emplace(c.guard("/hamiltonian", [&] { return Propagator(H, g); }));

  std::ostringstream cons, resid;
  cons << "t,norm,deviation\n";
  resid << "t,residual\n";
  json r, files = json::array();
  r["command"] = "evolve";
  add_grid(r, g);
  r["perturbed"] = H.perturbation.has_value();
  json rows = json::array();
  const double n0 = u0.norm();
  for (size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    const Signal ut = t == 0.0 ? u0 : P ? (*P)(t, u0) : propagate_quadratic(H.quad, t, u0);
    const std::string name = "u_" + std::to_string(k) + ".json";
    io::save_signal(ut, out / name);
    files.push_back(name);
    const double dev = std::abs(ut.norm() - n0) / n0;
    cons << io::format_double(t) << ',' << io::format_double(ut.norm()) << ',' << io::format_double(dev) << '\n';
    json row{{"t", t}, {"file", name}, {"norm", ut.norm()}, {"deviation", dev}};
    if (!H.perturbation) {
      const double res = evolved_wigner_check(H.quad, tau, t, u0);
      resid << io::format_double(t) << ',' << io::format_double(res) << '\n';
      row["residual"] = res;
    }
    rows.push_back(row);
  }
  io::write_text(out / "conservation.csv", cons.str());
  files.push_back("conservation.csv");
  if (!H.perturbation) {
    io::write_text(out / "residual.csv", resid.str());
    files.push_back("residual.csv");
  }
  r["tau"] = tau;
  r["steps"] = rows;
  r["files"] = files;
  write_report(out, r);
}

Mat symplectic_2x2(const Config& c, const std::string& ptr) {
  const Mat M = c.guard(ptr, [&] { return io::matrix_from_json(c.at(ptr)); });
  if (M.rows() != 2 || M.cols() != 2) c.fail(ptr, "expected a 2x2 matrix");
  if (std::abs(M.determinant() - 1.0) > 1e-9) c.fail(ptr, "matrix is not symplectic (det != 1)");
  return M;
}

Generator parse_generator(const Config& c, const std::string& ptr) {
  const std::string s = c.string(ptr);
  const auto [name, arg] = split_rep(s);
  return c.guard(ptr, [&]() -> Generator {
    if (name == "F" && arg.empty()) return {Gen::Fourier, Mat()};
    auto value = [&] {
      const auto v = parse_numbers(arg);
      if (v.size() != 1) throw ValidationError("generator '" + name + "' needs one value");
      return Mat::Constant(1, 1, v[0]);
    };
    if (name == "chirp") return {Gen::Chirp, value()};
    if (name == "rescale") return {Gen::Rescale, value()};
    c.fail(ptr, "unknown generator '" + s + "' (F, chirp:c, rescale:l)");
  });
}

DenseOperator make_operator(const Config& c, const std::string& ptr, const Grid& g) {
  const std::string kind = c.string(ptr + "/kind");
  if (kind == "identity") {
    c.allow(ptr, {"kind"});
    return identity_operator(g);
  }
  if (kind == "fourier") {
    c.allow(ptr, {"kind"});
    return {g, g, false, metaplectic_matrix(standard_J(1), g)};
  }
  if (kind == "metaplectic") {
    c.allow(ptr, {"kind", "matrix"});
    const Mat chi = symplectic_2x2(c, ptr + "/matrix");
    return {g, g, false, c.guard(ptr, [&] { return metaplectic_matrix(chi, g); })};
  }
  if (kind == "chain") {
    c.allow(ptr, {"kind", "gens"});
    const json& gens = c.at(ptr + "/gens");
    if (!gens.is_array() || gens.empty()) c.fail(ptr + "/gens", "expected a non-empty list of generators");
    GeneratorChain chain;
    for (size_t k = 0; k < gens.size(); ++k) chain.gens.push_back(parse_generator(c, ptr + "/gens/" + std::to_string(k)));
    return {g, g, false, c.guard(ptr, [&] { return metaplectic_matrix(chain.product(), g); })};
  }
  if (kind == "weyl") {
    c.allow(ptr, {"kind", "symbol"});
    const std::string text = c.string(ptr + "/symbol");
    const Expr e = c.guard(ptr + "/symbol", [&] { return Expr::parse(text); });
    if (e.uses("u") || e.uses("v")) c.fail(ptr + "/symbol", "the symbol depends on x and xi only");
    return c.guard(ptr, [&] { return weyl([&e](double x, double xi) { return cd(e(x, xi)); }, g); });
  }
  if (kind == "file") {
    c.allow(ptr, {"kind", "path"});
    DenseOperator op = c.guard(ptr, [&] { return io::load_operator(c.string(ptr + "/path")); });
    if (op.field || !op.g0.same(g)) c.fail(ptr, "operator file does not act on the configured signal grid");
    return op;
  }
  if (kind == "compose") {
    c.allow(ptr, {"kind", "ops"});
    const json& ops = c.at(ptr + "/ops");
    if (!ops.is_array() || ops.empty()) c.fail(ptr + "/ops", "expected a non-empty list of operators");
    DenseOperator T = make_operator(c, ptr + "/ops/0", g);
    for (size_t k = 1; k < ops.size(); ++k) T = T * make_operator(c, ptr + "/ops/" + std::to_string(k), g);
    return T;
  }
  c.fail(ptr + "/kind", "unknown operator kind '" + kind + "'");
}

void cmd_gaborscan(const Config& c, const fs::path& out) {
  c.allow("", {"grid", "operator", "window", "lattice", "chi", "qs", "op_norm", "seed", "out"});
  const Grid g = make_grid(c, "/grid");
  if (!c.has("/window")) c.fail("/window", "a window signal is required");
  const Signal w = make_signal(c, "/window", g);
  const DenseOperator T = make_operator(c, "/operator", g);
  c.allow("/lattice", {"gen", "radius"});
  const double radius = io::number(c.at("/lattice/radius"));
  const GaborLattice lattice = c.guard("/lattice", [&] {
    return GaborLattice::make(io::matrix_from_json(c.at("/lattice/gen")), radius);
  });
  std::optional<Mat> chi;
  if (c.has("/chi")) chi = symplectic_2x2(c, "/chi");
  std::vector<std::pair<double, double>> qs;
  const json& jq = c.at("/qs");
  if (!jq.is_array() || jq.empty()) c.fail("/qs", "expected a list of [q, s] pairs");
  for (size_t k = 0; k < jq.size(); ++k) {
    const std::string p = "/qs/" + std::to_string(k);
    if (!jq[k].is_array() || jq[k].size() != 2) c.fail(p, "expected [q, s]");
    qs.emplace_back(c.guard(p, [&] { return io::number(jq[k][0]); }), c.guard(p, [&] { return io::number(jq[k][1]); }));
  }
  const double op_norm = c.number("/op_norm");
  const GaborMatrixData data = c.guard("/lattice", [&] { return gabor_matrix(T, w, lattice, op_norm); });
  const EnvelopeReport rep = c.guard("/qs", [&] { return envelope_fit(data, chi, qs); });

  json r = io::to_json(rep);
  r["command"] = "gaborscan";
  add_grid(r, g);
  r["points"] = data.pts.size();
  r["files"] = {"envelope.json", "shells.csv"};
  io::write_text(out / "envelope.json", io::dump(r));
  io::write_shell_csv(rep, out / "shells.csv");
}

void cmd_wfs(const Config& c, const fs::path& out) {
  c.allow("", {"grid", "signal", "rep", "cones", "seed", "out"});
  const Grid g = make_grid(c, "/grid");
  const Signal f = make_signal(c, "/signal", g);
  c.allow("/cones", {"bins", "r0", "nmax", "threshold", "mass_floor", "min_decades", "wigner_extent"});
  WaveFrontConfig wc;
  wc.bins = c.integer("/cones/bins");
  wc.r0 = c.number("/cones/r0");
  wc.nmax = c.integer("/cones/nmax");
  wc.threshold = c.number("/cones/threshold");
  wc.mass_floor = c.number("/cones/mass_floor");
  wc.min_decades = c.number("/cones/min_decades");
  wc.wigner_extent = c.number("/cones/wigner_extent");
  const std::string rep = c.string("/rep");
  const auto [name, arg] = split_rep(rep);
  const WaveFrontReport wf = c.guard("/cones", [&]() -> WaveFrontReport {
    if (name == "wigner" && arg.empty()) return wavefront(f, WaveRep::wigner, wc);
    if (name == "stft" && arg.empty()) return wavefront(f, WaveRep::stft_global, wc);
    if (name == "covariant") {
      const CovariantForm cov = c.guard("/rep", [&] { return parse_covariant(arg); });
      return wavefront(f, WaveRep::wigner_A, wc, cov);
    }
    c.fail("/rep", "unknown representation '" + rep + "' (wigner, stft, covariant:a11,a13,a21)");
  });
  json r = io::to_json(wf);
  r["command"] = "wfs";
  r["rep"] = rep;
  add_grid(r, g);
  r["files"] = {"wavefront.json", "cones.csv"};
  io::write_text(out / "wavefront.json", io::dump(r));
  io::write_cone_csv(wf, out / "cones.csv");
}

}  // namespace

void run(const std::string& command, const Config& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  if (command == "wigner") cmd_wigner(cfg, out_dir);
  else if (command == "evolve") cmd_evolve(cfg, out_dir);
  else if (command == "gaborscan") cmd_gaborscan(cfg, out_dir);
  else if (command == "wfs") cmd_wfs(cfg, out_dir);
  else throw ValidationError("unknown command '" + command + "'");
}

}  // namespace metaplab::cli
