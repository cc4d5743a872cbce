#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractal/error.hpp"
#include "fractal/estimators.hpp"
#include "fractal/fieldgen.hpp"
#include "fractal/increment.hpp"
#include "fractal/transforms.hpp"

namespace fractal {

using json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(trim(s), &pos);
    if (pos != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw error(errc::parse_error, "cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace detail

/// Increment presets (diff0, diff1, square) or a literal list of
/// offset:coefficient pairs: "-1:1,0:-2,1:1" in 1D, "0,0:1;1,1:1;1,0:-1;0,1:-1" in 2D.
inline increment parse_increment(const std::string& text) {
  const std::string s = detail::trim(text);
  if (s == "diff0") return increment::forward_difference();
  if (s == "diff1") return increment::second_difference();
  if (s == "square") return increment::square();

  std::vector<std::string> entries;
  if (s.find(';') != std::string::npos) {
    entries = detail::split(s, ';');
  } else {
    entries = detail::split(s, ',');
    for (const auto& e : entries)
      if (e.find(':') == std::string::npos) {
        entries = {s};
        break;
      }
  }
  coeff_map coeffs;
  for (const auto& raw : entries) {
    const auto e = detail::trim(raw);
    const auto colon = e.find(':');
    if (colon == std::string::npos) throw error(errc::parse_error, "increment entry '" + e + "' lacks ':'");
    const auto parts = detail::split(e.substr(0, colon), ',');
    const double a = detail::parse_real(detail::trim(e.substr(colon + 1)), "increment coefficient");
    multi_index j;
    if (parts.size() == 1)
      j = multi_index(detail::parse_int(parts[0], "increment offset"));
    else if (parts.size() == 2)
      j = multi_index(detail::parse_int(parts[0], "increment offset"), detail::parse_int(parts[1], "increment offset"));
    else
      throw error(errc::parse_error, "increment offsets must have one or two components: '" + e + "'");
    if (!coeffs.empty() && coeffs.begin()->first.dim != j.dim)
      throw error(errc::parse_error, "increment offsets mix dimensions");
    if (coeffs.contains(j)) throw error(errc::parse_error, "duplicate increment offset " + j.str());
    coeffs.emplace(j, a);
  }
  return increment(std::move(coeffs), s);
}

inline std::string increment_literal(const increment& inc) {
  std::string out;
  const char sep = inc.dim() == 2 ? ';' : ',';
  for (const auto& [j, a] : inc.coeffs()) {
    if (!out.empty()) out += sep;
    out += j.str() + ":" + detail::format_real(a);
  }
  return out;
}

inline json field_metadata(const field_sample& s) {
  json n0 = json::array();
  for (int l = 0; l < s.grid.dim(); ++l) n0.push_back(s.grid.n0[l]);
  return json{{"format", "fractal-field"},
              {"dim", s.grid.dim()},
              {"n0", n0},
              {"margin", s.grid.margin},
              {"seed", s.seed},
              {"model", {{"alpha", s.model.alpha}, {"c", s.model.c}, {"dim", s.model.dim}}},
              {"transform", s.transform}};
}

namespace detail {

inline void apply_metadata(field_sample& s, const json& meta) {
  if (meta.contains("seed")) s.seed = meta["seed"].get<std::uint64_t>();
  if (meta.contains("transform")) s.transform = meta["transform"].get<std::string>();
  if (meta.contains("model")) {
    const auto& m = meta["model"];
    s.model = covariance_model::make(m.at("alpha").get<double>(), s.grid.dim(), m.at("c").get<double>());
  } else {
    s.model = covariance_model{1.0, default_scale(s.grid.dim()), s.grid.dim()};
  }
}

}  // namespace detail

/// CSV: '#'-prefixed JSON header lines (field metadata, then any extra
/// config), a column line, then one row per grid point in storage order:
/// "index,value" in 1D, "row,col,value" in 2D, with grid indices running
/// from -margin to n0 + margin - 1.
inline void write_field_csv(std::ostream& out, const field_sample& s, const json& config = nullptr) {
  out << "# field: " << field_metadata(s).dump() << '\n';
  if (!config.is_null()) out << "# config: " << config.dump() << '\n';
  out << (s.grid.dim() == 1 ? "index,value\n" : "row,col,value\n");
  char buf[64];
  const auto lo = s.values.lo();
  const auto ext = s.values.extent();
  const auto vals = s.values.values();
  std::size_t k = 0;
  if (s.grid.dim() == 1) {
    for (std::int64_t i = 0; i < ext[0]; ++i, ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
      out << (lo[0] + i) << ',' << buf << '\n';
    }
  } else {
    for (std::int64_t i = 0; i < ext[0]; ++i)
      for (std::int64_t j = 0; j < ext[1]; ++j, ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
        out << (lo[0] + i) << ',' << (lo[1] + j) << ',' << buf << '\n';
      }
  }
}

inline field_sample read_field_csv(std::istream& in) {
  json meta;
  std::string line;
  std::vector<std::vector<std::int64_t>> idx;
  std::vector<double> vals;
  int dim = 0;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = detail::trim(line.substr(1));
      if (body.rfind("field:", 0) == 0) {
        try {
          meta = json::parse(body.substr(6));
        } catch (const std::exception& e) {
          throw error(errc::parse_error, std::string("bad field metadata: ") + e.what());
        }
      }
      continue;
    }
    if (line == "index,value") {
      dim = 1;
      continue;
    }
    if (line == "row,col,value") {
      dim = 2;
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (dim == 0) dim = static_cast<int>(cells.size()) - 1;
    if (static_cast<int>(cells.size()) != dim + 1 || (dim != 1 && dim != 2))
      throw error(errc::parse_error, "malformed field row '" + line + "'");
    std::vector<std::int64_t> ij;
    for (int l = 0; l < dim; ++l) ij.push_back(detail::parse_int(cells[static_cast<std::size_t>(l)], "grid index"));
    idx.push_back(std::move(ij));
    vals.push_back(detail::parse_real(detail::trim(cells.back()), "field value"));
  }
  if (vals.empty()) throw error(errc::parse_error, "field file has no data rows");

  multi_index lo = multi_index::zero(dim), hi = multi_index::zero(dim);
  for (int l = 0; l < dim; ++l) {
    lo[l] = hi[l] = idx[0][static_cast<std::size_t>(l)];
    for (const auto& ij : idx) {
      lo[l] = std::min(lo[l], ij[static_cast<std::size_t>(l)]);
      hi[l] = std::max(hi[l], ij[static_cast<std::size_t>(l)]);
    }
  }
  const std::int64_t margin = -lo[0];
  multi_index n0 = multi_index::zero(dim);
  for (int l = 0; l < dim; ++l) {
    if (-lo[l] != margin) throw error(errc::parse_error, "grid indices must start at -margin on every axis");
    n0[l] = hi[l] - lo[l] + 1 - 2 * margin;
  }
  field_sample s;
  s.grid = grid_spec::make(n0, margin);
  s.values = field_grid(s.grid.lo(), s.grid.extent(), std::numeric_limits<double>::quiet_NaN());
  if (vals.size() != s.values.size()) throw error(errc::parse_error, "field file does not cover a full grid");
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const auto& ij = idx[k];
    const multi_index i = dim == 1 ? multi_index(ij[0]) : multi_index(ij[0], ij[1]);
    s.values[i] = vals[k];
  }
  for (double v : s.values.values())
    if (std::isnan(v)) throw error(errc::parse_error, "field file has duplicate or missing grid points");
  detail::apply_metadata(s, meta);
  return s;
}

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u64(std::istream& in, std::uint64_t& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return true;
}

inline constexpr char raster_trailer_tag[9] = "FRCTMETA";

}  // namespace detail

/// Binary raster, little-endian throughout:
///   int64 dim, int64 n0[0] (, int64 n0[1]), int64 margin,
///   prod(n0 + 2 margin) IEEE-754 float64 values in row-major order,
///   then a trailer: the 8 bytes "FRCTMETA", uint64 length, UTF-8 JSON metadata.
inline void write_field_binary(std::ostream& out, const field_sample& s, const json& config = nullptr) {
  const int d = s.grid.dim();
  detail::put_u64(out, static_cast<std::uint64_t>(d));
  for (int l = 0; l < d; ++l) detail::put_u64(out, static_cast<std::uint64_t>(s.grid.n0[l]));
  detail::put_u64(out, static_cast<std::uint64_t>(s.grid.margin));
  for (double v : s.values.values()) detail::put_u64(out, std::bit_cast<std::uint64_t>(v));
  json meta = field_metadata(s);
  if (!config.is_null()) meta["config"] = config;
  const std::string text = meta.dump();
  out.write(detail::raster_trailer_tag, 8);
  detail::put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline field_sample read_field_binary(std::istream& in) {
  std::uint64_t d = 0;
  if (!detail::get_u64(in, d) || (d != 1 && d != 2)) throw error(errc::parse_error, "bad raster header (dim)");
  multi_index n0 = multi_index::zero(static_cast<int>(d));
  for (int l = 0; l < static_cast<int>(d); ++l) {
    std::uint64_t v = 0;
    if (!detail::get_u64(in, v) || v == 0 || v > (1ULL << 31)) throw error(errc::parse_error, "bad raster header (n0)");
    n0[l] = static_cast<std::int64_t>(v);
  }
  std::uint64_t margin = 0;
  if (!detail::get_u64(in, margin) || margin > (1ULL << 31)) throw error(errc::parse_error, "bad raster header (margin)");
  field_sample s;
  s.grid = grid_spec::make(n0, static_cast<std::int64_t>(margin));
  s.values = field_grid(s.grid.lo(), s.grid.extent());
  for (double& v : s.values.values()) {
    std::uint64_t bits = 0;
    if (!detail::get_u64(in, bits)) throw error(errc::parse_error, "raster is truncated");
    v = std::bit_cast<double>(bits);
  }
  json meta;
  char tag[8];
  if (in.read(tag, 8) && std::memcmp(tag, detail::raster_trailer_tag, 8) == 0) {
    std::uint64_t len = 0;
    if (!detail::get_u64(in, len)) throw error(errc::parse_error, "raster trailer is truncated");
    std::string text(len, '\0');
    if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw error(errc::parse_error, "raster trailer is truncated");
    try {
      meta = json::parse(text);
    } catch (const std::exception& e) {
      throw error(errc::parse_error, std::string("bad raster metadata: ") + e.what());
    }
  }
  detail::apply_metadata(s, meta);
  return s;
}

/// Reads either format; rasters are recognized by their leading int64 dim.
inline field_sample read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
  const int first = in.peek();
  if (first == 1 || first == 2) return read_field_binary(in);
  return read_field_csv(in);
}

inline json estimate_report(const estimate_result& r, const json& config = nullptr) {
  json out;
  if (!config.is_null()) out["config"] = config;
  out["alpha_hat"] = r.alpha_hat;
  out["dimension_hat"] = r.dimension_hat;
  out["m"] = r.weights.m();
  out["scheme"] = scheme_name(r.weights.scheme);
  out["zbar"] = r.zbar;
  out["weights"] = r.weights.L;
  out["clamped"] = r.clamped;
  out["residuals"] = r.residuals;
  if (r.pilot_alpha) out["pilot_alpha"] = *r.pilot_alpha;
  if (r.weights.fallback) out["gls_fallback"] = true;
  return out;
}

}  // namespace fractal
