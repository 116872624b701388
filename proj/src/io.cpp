#include "metaplab/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace metaplab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit(const json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
        emit(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j)
        if (e.is_structured()) flat = false;
      if (flat) {
        out += "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += indent > 0 ? ", " : ",";
          emit(j[i], indent, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[";
      out += nl;
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) {
          out += ",";
          out += nl;
        }
        out += pad;
        emit(j[i], indent, depth + 1, out);
      }
      out += nl + close + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

void write_le(std::ofstream& os, double v) {
  unsigned char b[8];
  std::memcpy(b, &v, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_le(const unsigned char* p) {
  unsigned char b[8];
  std::memcpy(b, p, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
  double v;
  std::memcpy(&v, b, 8);
  return v;
}

fs::path sidecar(const fs::path& header) {
  fs::path p = header;
  p.replace_extension(".bin");
  return p;
}

void write_sidecar(const fs::path& header, const cd* data, Eigen::Index n) {
  std::ofstream os(sidecar(header), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + sidecar(header).string());
  for (Eigen::Index k = 0; k < n; ++k) {
    write_le(os, data[k].real());
    write_le(os, data[k].imag());
  }
}

void read_sidecar(const fs::path& header, const json& h, cd* data, Eigen::Index n) {
  const fs::path bin = header.parent_path() / h.at("data").get<std::string>();
  std::ifstream is(bin, std::ios::binary);
  if (!is) throw ValidationError("cannot open data file " + bin.string());
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (raw.size() != static_cast<size_t>(n) * 16)
    throw ShapeError(bin.string() + ": expected " + std::to_string(n * 16) + " bytes, found " +
                     std::to_string(raw.size()));
  for (Eigen::Index k = 0; k < n; ++k) data[k] = {read_le(&raw[16 * k]), read_le(&raw[16 * k + 8])};
}

json read_header(const fs::path& path, const std::string& kind) {
  json h;
  try {
    h = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (h.value("kind", "") != kind) throw ValidationError(path.string() + ": expected a " + kind + " header");
  if (h.value("dtype", "") != "c128") throw ValidationError(path.string() + ": dtype must be c128");
  return h;
}

json header(const std::string& kind, const fs::path& path, const std::vector<Grid>& grids, bool interpolated) {
  json h;
  h["kind"] = kind;
  h["dim"] = grids.size();
  json N = json::array(), L = json::array();
  for (const auto& g : grids) {
    N.push_back(g.N);
    L.push_back(g.L);
  }
  h["N"] = N;
  h["L"] = L;
  h["dtype"] = "c128";
  h["interpolated"] = interpolated;
  h["data"] = sidecar(path).filename().string();
  return h;
}

Grid grid_at(const json& h, size_t axis) {
  return Grid::make(h.at("N").at(axis).get<int>(), number(h.at("L").at(axis)));
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  if (indent > 0) out += "\n";
  return out;
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("expected a number, found " + j.dump());
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return json{{"n", m.rows()}, {"rows", rows}};
}

Mat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows")) throw ValidationError("matrix: expected {\"n\": ..., \"rows\": [...]}");
  const json& rows = j.at("rows");
  if (!rows.is_array() || rows.empty()) throw ShapeError("matrix: rows must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (j.contains("n") && j.at("n").get<Eigen::Index>() != n) throw ShapeError("matrix: n does not match the row count");
  const auto m = static_cast<Eigen::Index>(rows[0].size());
  Mat M(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != m)
      throw ShapeError("matrix: ragged rows");
    for (Eigen::Index k = 0; k < m; ++k) M(i, k) = number(rows[i][k]);
  }
  return M;
}

void save_signal(const Signal& s, const fs::path& path) {
  write_text(path, dump(header("signal", path, {s.grid}, s.interpolated)));
  write_sidecar(path, s.v.data(), s.v.size());
}

Signal load_signal(const fs::path& path) {
  const json h = read_header(path, "signal");
  Signal s{grid_at(h, 0), CVec(h.at("N").at(0).get<int>()), h.value("interpolated", false)};
  read_sidecar(path, h, s.v.data(), s.v.size());
  return s;
}

void save_field(const Field& f, const fs::path& path) {
  write_text(path, dump(header("field", path, {f.g0, f.g1}, f.interpolated)));
  write_sidecar(path, f.v.data(), f.v.size());
}

Field load_field(const fs::path& path) {
  const json h = read_header(path, "field");
  Field f{grid_at(h, 0), grid_at(h, 1), CMat(h.at("N").at(0).get<int>(), h.at("N").at(1).get<int>()),
          h.value("interpolated", false)};
  read_sidecar(path, h, f.v.data(), f.v.size());
  return f;
}

void save_operator(const DenseOperator& op, const fs::path& path) {
  json h = header("operator", path, {op.g0, op.g1}, false);
  h["field"] = op.field;
  h["shape"] = json::array({op.m.rows(), op.m.cols()});
  write_text(path, dump(h));
  write_sidecar(path, op.m.data(), op.m.size());
}

DenseOperator load_operator(const fs::path& path) {
  const json h = read_header(path, "operator");
  DenseOperator op{grid_at(h, 0), grid_at(h, 1), h.value("field", false),
                   CMat(h.at("shape").at(0).get<Eigen::Index>(), h.at("shape").at(1).get<Eigen::Index>())};
  const Eigen::Index side = op.field ? Eigen::Index(op.g0.N) * op.g1.N : op.g0.N;
  if (op.m.rows() != side || op.m.cols() != side) throw ShapeError(path.string() + ": shape does not match the grids");
  read_sidecar(path, h, op.m.data(), op.m.size());
  return op;
}

namespace {

std::ofstream open_csv(const fs::path& path, const char* head) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << head << '\n';
  return os;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_signal_csv(const Signal& s, const fs::path& path) {
  auto os = open_csv(path, "x,re,im");
  for (int k = 0; k < s.grid.N; ++k)
    os << num(s.grid.x(k)) << ',' << num(s.v[k].real()) << ',' << num(s.v[k].imag()) << '\n';
}

void write_field_csv(const Field& f, const fs::path& path) {
  auto os = open_csv(path, "x,xi,re,im,abs");
  for (int i = 0; i < f.g0.N; ++i)
    for (int j = 0; j < f.g1.N; ++j) {
      const cd z = f.v(i, j);
      os << num(f.g0.x(i)) << ',' << num(f.g1.x(j)) << ',' << num(z.real()) << ',' << num(z.imag()) << ','
         << num(std::abs(z)) << '\n';
    }
}

void write_shell_csv(const EnvelopeReport& r, const fs::path& path) {
  auto os = open_csv(path, "k1,k2,k,h");
  for (const auto& c : r.shells)
    os << c.k1 << ',' << c.k2 << ',' << num(std::hypot(c.k1, c.k2)) << ',' << num(c.h) << '\n';
}

void write_cone_csv(const WaveFrontReport& r, const fs::path& path) {
  auto os = open_csv(path, "angle,N,I");
  for (const auto& c : r.cones)
    for (size_t n = 0; n < c.I.size(); ++n) os << num(c.angle) << ',' << n << ',' << num(c.I[n]) << '\n';
}

json to_json(const Grid& g) { return json{{"N", g.N}, {"L", g.L}}; }

json to_json(const EnvelopeReport& r) {
  json j;
  j["chi"] = matrix_to_json(r.chi);
  j["estimated"] = r.estimated;
  j["spread"] = r.spread;
  j["decay_slope"] = r.decay_slope;
  j["frame"] = r.frame ? json{{"A", r.frame->A}, {"B", r.frame->B}} : json(nullptr);
  json norms = json::array();
  for (const auto& n : r.norms) norms.push_back(json{{"q", n.q}, {"s", n.s}, {"value", n.value}, {"tail", n.tail}});
  j["norms"] = norms;
  json shells = json::array();
  for (const auto& c : r.shells) shells.push_back(json{{"k1", c.k1}, {"k2", c.k2}, {"h", c.h}});
  j["shells"] = shells;
  return j;
}

json to_json(const WaveFrontReport& r) {
  json j;
  j["decades"] = r.decades;
  j["inconclusive"] = r.inconclusive;
  j["singular_bins"] = r.singular_bins();
  json cones = json::array();
  for (size_t b = 0; b < r.cones.size(); ++b) {
    const auto& c = r.cones[b];
    cones.push_back(json{{"bin", b}, {"angle", c.angle}, {"I", c.I}, {"slope", c.slope}, {"r_max", c.r_max},
                         {"singular", c.singular}});
  }
  j["cones"] = cones;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace metaplab::io
