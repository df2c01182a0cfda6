// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/dict_cache.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nfswarm {

namespace {

constexpr char kMagic[8] = {'N', 'F', 'S', 'W', 'D', 'C', '0', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kKindSd = 1;
constexpr std::uint8_t kKindTensor = 2;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void write_rvec(std::ostream& os, const RVec& v) {
  write_u32(os, static_cast<std::uint32_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

RVec read_rvec(std::istream& is) {
  RVec v(read_u32(is));
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  return v;
}

void write_cmat(std::ostream& os, const CMat& m) {
  write_u32(os, static_cast<std::uint32_t>(m.rows()));
  write_u32(os, static_cast<std::uint32_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i) {
    const CVec row = m.row(i);
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(cxd)));
  }
}

CMat read_cmat(std::istream& is) {
  const std::uint32_t rows = read_u32(is);
  const std::uint32_t cols = read_u32(is);
  CMat m(rows, cols);
  CVec row(cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(cxd)));
    m.row(i) = row;
  }
  return m;
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  std::string s(read_u32(is), '\0');
  is.read(s.data(), static_cast<std::streamsize>(s.size()));
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("dict_cache: cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path, std::uint8_t expected_kind,
                      const std::string& content_key) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("dict_cache: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
    throw std::runtime_error("dict_cache: bad magic in " + path);
  if (read_u32(is) != kVersion)
    throw std::runtime_error("dict_cache: unsupported version in " + path);
  std::uint8_t kind = 0;
  is.read(reinterpret_cast<char*>(&kind), 1);
  if (kind != expected_kind)
    throw std::runtime_error("dict_cache: wrong dictionary kind in " + path);
  if (read_string(is) != content_key)
    throw std::runtime_error("dict_cache: content key mismatch in " + path);
  return is;
}

void write_header(std::ostream& os, std::uint8_t kind, const std::string& key) {
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kVersion);
  os.write(reinterpret_cast<const char*>(&kind), 1);
  write_string(os, key);
}

void write_grid(std::ostream& os, const SamplingGrid& grid) {
  write_rvec(os, grid.azimuth);
  write_rvec(os, grid.elevation);
  write_rvec(os, grid.inv_range);
  os.write(reinterpret_cast<const char*>(&grid.delta), sizeof grid.delta);
  os.write(reinterpret_cast<const char*>(&grid.z_delta), sizeof grid.z_delta);
  const std::uint8_t ok = grid.delta_ok ? 1 : 0;
  os.write(reinterpret_cast<const char*>(&ok), 1);
}

SamplingGrid read_grid(std::istream& is) {
  SamplingGrid grid;
  grid.azimuth = read_rvec(is);
  grid.elevation = read_rvec(is);
  grid.inv_range = read_rvec(is);
  is.read(reinterpret_cast<char*>(&grid.delta), sizeof grid.delta);
  is.read(reinterpret_cast<char*>(&grid.z_delta), sizeof grid.z_delta);
  std::uint8_t ok = 1;
  is.read(reinterpret_cast<char*>(&ok), 1);
  grid.delta_ok = ok != 0;
  return grid;
}

}  // namespace

void save_sd_dictionary(const std::string& path, const SdDictionary& dict,
                        const std::string& content_key) {
  std::ofstream os = open_out(path);
  write_header(os, kKindSd, content_key);
  write_grid(os, dict.grid);
  os.write(reinterpret_cast<const char*>(&dict.beta0), sizeof dict.beta0);
  write_cmat(os, dict.columns);
  if (!os) throw std::runtime_error("dict_cache: write failed for " + path);
}

SdDictionary load_sd_dictionary(const std::string& path,
                                const std::string& content_key) {
  std::ifstream is = open_in(path, kKindSd, content_key);
  SdDictionary dict;
  dict.grid = read_grid(is);
  is.read(reinterpret_cast<char*>(&dict.beta0), sizeof dict.beta0);
  dict.columns = read_cmat(is);
  if (!is) throw std::runtime_error("dict_cache: truncated file " + path);
  return dict;
}

void save_tensor_dictionary(const std::string& path, const TensorDictionary& dict,
                            const std::string& content_key) {
  std::ofstream os = open_out(path);
  write_header(os, kKindTensor, content_key);
  write_grid(os, dict.grid);
  os.write(reinterpret_cast<const char*>(&dict.beta0), sizeof dict.beta0);
  write_cmat(os, dict.u_atoms);
  write_cmat(os, dict.v_atoms);
  write_cmat(os, dict.b_atoms);
  write_cmat(os, dict.projected_u);
  write_cmat(os, dict.projected_v);
  if (!os) throw std::runtime_error("dict_cache: write failed for " + path);
}

TensorDictionary load_tensor_dictionary(const std::string& path,
                                        const std::string& content_key) {
  std::ifstream is = open_in(path, kKindTensor, content_key);
  TensorDictionary dict;
  dict.grid = read_grid(is);
  is.read(reinterpret_cast<char*>(&dict.beta0), sizeof dict.beta0);
  dict.u_atoms = read_cmat(is);
  dict.v_atoms = read_cmat(is);
  dict.b_atoms = read_cmat(is);
  dict.projected_u = read_cmat(is);
  dict.projected_v = read_cmat(is);
  if (!is) throw std::runtime_error("dict_cache: truncated file " + path);
  return dict;
}

bool cache_file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

}  // namespace nfswarm
