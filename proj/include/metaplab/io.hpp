#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "metaplab/gabor.hpp"
#include "metaplab/schrodinger.hpp"

namespace metaplab::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Doubles with 17 significant digits; non-finite values become the strings "inf", "-inf", "nan".
std::string format_double(double v);
std::string dump(const json& j, int indent = 2);
double number(const json& j);  // accepts the non-finite strings above

json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j);

// JSON header next to a raw little-endian interleaved float64 (re, im) sidecar.
// Fields are stored axis 0 fastest; the header records the sidecar's file name.
void save_signal(const Signal& s, const fs::path& header);
Signal load_signal(const fs::path& header);
void save_field(const Field& f, const fs::path& header);
Field load_field(const fs::path& header);
void save_operator(const DenseOperator& op, const fs::path& header);
DenseOperator load_operator(const fs::path& header);

void write_signal_csv(const Signal& s, const fs::path& path);   // x, re, im
void write_field_csv(const Field& f, const fs::path& path);     // x, xi, re, im, abs
void write_shell_csv(const EnvelopeReport& r, const fs::path& path);  // k1, k2, k, h
void write_cone_csv(const WaveFrontReport& r, const fs::path& path);  // angle, N, I

json to_json(const Grid& g);
json to_json(const EnvelopeReport& r);
json to_json(const WaveFrontReport& r);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace metaplab::io
