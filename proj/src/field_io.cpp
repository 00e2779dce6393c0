#include "tnls/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "tnls/errors.hpp"

namespace tnls {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

template <class T>
void put(std::vector<char>& buf, T v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
T take(const std::vector<char>& buf, std::size_t& pos, const std::string& path) {
  if (pos + sizeof(T) > buf.size()) throw IoError(path, "truncated snapshot");
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const PhysicalField& field) {
  std::vector<char> buf;
  buf.reserve(4 + 4 + 16 + 32 + field.size() * 16);
  buf.insert(buf.end(), {'T', 'N', 'L', 'S'});
  put<std::uint32_t>(buf, kSnapshotVersion);
  for (int g : field.geometry().grid()) put<std::uint32_t>(buf, static_cast<std::uint32_t>(g));
  for (double l : field.geometry().lambda()) put<double>(buf, l);
  for (const cplx& z : field.samples()) {
    put<double>(buf, z.real());
    put<double>(buf, z.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError(path, "write failed");
}

PhysicalField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), "TNLS", 4) != 0) throw IoError(path, "bad magic");
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(buf, pos, path);
  if (version != kSnapshotVersion) throw IoError(path, "unsupported snapshot version " + std::to_string(version));
  Index4 grid{};
  Vec4 lambda{};
  for (int& g : grid) g = static_cast<int>(take<std::uint32_t>(buf, pos, path));
  for (double& l : lambda) l = take<double>(buf, pos, path);
  TorusGeometry geometry;
  try {
    geometry = TorusGeometry(lambda, grid);
  } catch (const DomainError& e) {
    throw IoError(path, std::string("invalid header: ") + e.what());
  }
  if (buf.size() - pos != geometry.size() * 16) throw IoError(path, "payload size does not match header");
  ComplexArray samples(geometry.size());
  for (cplx& z : samples) {
    const double re = take<double>(buf, pos, path);
    const double im = take<double>(buf, pos, path);
    z = cplx(re, im);
  }
  return PhysicalField(geometry, std::move(samples));
}

}  // namespace tnls
