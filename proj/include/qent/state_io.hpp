#pragma once

// JSON state files: {"dims": [dA, dB] or [d], "re": [[...]], "im": [[...]]}
// with row-major real and imaginary parts written at 17 significant digits.

#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/states.hpp"

namespace qent {

struct StateFile {
  std::vector<std::size_t> dims;
  DensityOperator state;

  bool bipartite() const { return dims.size() == 2; }

  BipartiteState as_bipartite() const {
    if (!bipartite()) throw ParseError("state file has no bipartite dims [dA, dB]");
    return BipartiteState(state, dims[0], dims[1]);
  }
};

inline StateFile parse_state_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("re") || !j.contains("im")) {
    throw ParseError("state file needs \"dims\", \"re\" and \"im\"");
  }
  const auto& dims = j["dims"];
  if (!dims.is_array() || dims.empty() || dims.size() > 2) {
    throw ParseError("\"dims\" must be [d] or [dA, dB]");
  }
  std::vector<std::size_t> d;
  std::size_t n = 1;
  for (const auto& x : dims) {
    if (!x.is_number_integer() || x.get<long long>() <= 0) {
      throw ParseError("\"dims\" entries must be positive integers");
    }
    d.push_back(x.get<std::size_t>());
    n *= d.back();
  }
  auto read_part = [&](const char* key) {
    const auto& rows = j[key];
    if (!rows.is_array() || rows.size() != n) {
      throw ParseError(std::string("\"") + key + "\" must have " + std::to_string(n) + " rows");
    }
    std::vector<double> out;
    out.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) {
        throw ParseError(std::string("\"") + key + "\" rows must have " + std::to_string(n) + " entries");
      }
      for (const auto& x : row) {
        if (!x.is_number()) throw ParseError(std::string("\"") + key + "\" entries must be numbers");
        out.push_back(x.get<double>());
      }
    }
    return out;
  };
  const std::vector<double> re = read_part("re");
  const std::vector<double> im = read_part("im");
  std::vector<Complex> entries(n * n);
  for (std::size_t k = 0; k < n * n; ++k) entries[k] = {re[k], im[k]};
  try {
    return StateFile{std::move(d), DensityOperator(ComplexMatrix(n, n, std::move(entries)))};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("not a valid density operator: ") + e.what());
  }
}

inline StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_state_json(text);
}

/// Fixed 17 significant digits, locale independent.
inline std::string format_double(double x, int digits = 17) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::string state_to_json(const ComplexMatrix& m, const std::vector<std::size_t>& dims) {
  std::ostringstream os;
  os << "{\"dims\": [";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? ", " : "") << dims[i];
  os << "],\n";
  auto part = [&](const char* key, auto get) {
    os << " \"" << key << "\": [";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      os << (i ? ",\n   [" : "\n   [");
      for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << format_double(get(m(i, j)));
      os << "]";
    }
    os << "]";
  };
  part("re", [](Complex z) { return z.real(); });
  os << ",\n";
  part("im", [](Complex z) { return z.imag(); });
  os << "}\n";
  return os.str();
}

inline std::string state_to_json(const BipartiteState& s) {
  return state_to_json(s.matrix(), {s.dA(), s.dB()});
}

inline std::string state_to_json(const DensityOperator& s) {
  return state_to_json(s.matrix(), {s.dim()});
}

inline void write_state_file(const std::string& path, const std::string& json) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << json;
}

}  // namespace qent
