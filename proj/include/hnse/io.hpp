#pragma once

// Binary state format and debug mirrors.
//
//   magic "HNSE" | u32 version=1 | u32 d | u32 M | u32 n_lambda |
//   grid_mode byte | lambda nodes f64[n_lambda] |
//   coefficients f64 interleaved (re, im), (n-major, m, lambda) order.
//
// A horizontal field is 2d consecutive coefficient blocks; scalar vs
// horizontal is inferred from the payload size. Everything little-endian.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hnse/spectral_field.hpp"
#include "json.hpp"

namespace hnse {

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  std::uint32_t u32() {
    require(pos_ + 4 <= data_.size(), "hnse state: truncated file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    require(pos_ + 8 <= data_.size(), "hnse state: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  char byte() {
    require(pos_ + 1 <= data_.size(), "hnse state: truncated file");
    return data_[pos_++];
  }
  std::size_t remaining() const { return data_.size() - pos_; }

private:
  std::string data_;
  std::size_t pos_ = 0;
};

inline std::string header_bytes(const FrequencyGrid& g) {
  std::string buf = "HNSE";
  put_u32(buf, 1u);
  put_u32(buf, static_cast<std::uint32_t>(g.d));
  put_u32(buf, static_cast<std::uint32_t>(g.M));
  put_u32(buf, static_cast<std::uint32_t>(g.n_lambda()));
  buf.push_back(static_cast<char>(g.mode));
  for (double x : g.lambda_nodes) put_f64(buf, x);
  return buf;
}

inline void append_coeffs(std::string& buf, const SpectralField& f) {
  for (const auto& c : f.data()) {
    put_f64(buf, c.real());
    put_f64(buf, c.imag());
  }
}

// Rebuild the grid from the stored node list; weights are derived.
inline GridPtr grid_from_header(int d, int M, GridMode mode,
                                const std::vector<double>& nodes) {
  const int nl = static_cast<int>(nodes.size());
  require(nl >= 2 && nl % 2 == 0, "hnse state: bad node list");
  if (mode == GridMode::uniform_periodic) {
    const double dl = nodes[nl / 2];  // smallest positive node
    return make_uniform_grid(d, M, 2.0 * pi / dl, nl);
  }
  const double lambda0 = nodes[nl / 2];
  const double ratio = nl > 2 ? nodes[nl / 2 + 1] / nodes[nl / 2] : 2.0;
  return make_geometric_grid(d, M, lambda0, ratio, nl / 2);
}

}  // namespace detail

inline void save_state(const std::string& path, const SpectralField& f) {
  std::string buf = detail::header_bytes(f.grid());
  detail::append_coeffs(buf, f);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_state: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline void save_state(const std::string& path, const HorizontalField& u) {
  std::string buf = detail::header_bytes(u.grid());
  for (int j = 0; j < u.n_components(); ++j) detail::append_coeffs(buf, u[j]);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_state: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

struct LoadedState {
  GridPtr grid;
  std::vector<SpectralField> blocks;  // 1 = scalar, 2d = horizontal

  bool is_horizontal() const {
    return static_cast<int>(blocks.size()) == 2 * grid->d;
  }
  HorizontalField horizontal() const {
    require(is_horizontal(), "state: not a horizontal field");
    return HorizontalField(blocks);
  }
};

inline LoadedState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_state: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  detail::Reader r(ss.str());

  char magic[4];
  for (auto& c : magic) c = r.byte();
  require(std::memcmp(magic, "HNSE", 4) == 0, "load_state: bad magic");
  require(r.u32() == 1u, "load_state: unsupported version");
  const int d = static_cast<int>(r.u32());
  const int M = static_cast<int>(r.u32());
  const int nl = static_cast<int>(r.u32());
  const GridMode mode = static_cast<GridMode>(r.byte());
  std::vector<double> nodes(nl);
  for (auto& x : nodes) x = r.f64();

  LoadedState st;
  st.grid = detail::grid_from_header(d, M, mode, nodes);
  const std::size_t block_bytes =
      static_cast<std::size_t>(st.grid->coeff_count()) * 16;
  require(block_bytes > 0 && r.remaining() % block_bytes == 0,
          "load_state: payload size mismatch");
  const std::size_t nblocks = r.remaining() / block_bytes;
  require(nblocks == 1 || nblocks == static_cast<std::size_t>(2 * d),
          "load_state: unexpected block count");
  for (std::size_t b = 0; b < nblocks; ++b) {
    SpectralField f(st.grid);
    for (auto& c : f.data()) {
      const double re = r.f64();
      const double im = r.f64();
      c = cplx(re, im);
    }
    require(f.finite(), "load_state: non-finite coefficients");
    st.blocks.push_back(std::move(f));
  }
  return st;
}

// --- JSON mirror (debugging) --------------------------------------------------

inline nlohmann::json to_json(const SpectralField& f) {
  const auto& g = f.grid();
  nlohmann::json j;
  j["format"] = "hnse-field";
  j["version"] = 1;
  j["d"] = g.d;
  j["M"] = g.M;
  j["grid_mode"] = g.mode == GridMode::geometric ? "geometric" : "uniform_periodic";
  j["lambda_nodes"] = g.lambda_nodes;
  auto coeffs = nlohmann::json::array();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  for (int n = 0; n < nm; ++n) {
    auto row_n = nlohmann::json::array();
    for (int m = 0; m < nm; ++m) {
      auto row_m = nlohmann::json::array();
      for (int k = 0; k < nl; ++k) {
        const cplx c = f.at(n, m, k);
        row_m.push_back({c.real(), c.imag()});
      }
      row_n.push_back(std::move(row_m));
    }
    coeffs.push_back(std::move(row_n));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

// --- CSV ------------------------------------------------------------------------

// fixed shortest-roundtrip formatting so identical runs are byte-identical
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path) {
    require(out_.good(), "csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_double(values[i]);
    }
    out_ << '\n';
  }

private:
  std::ofstream out_;
};

}  // namespace hnse
