#include "betaplane/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "betaplane/errors.hpp"

namespace betaplane {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ParseError("snapshot: truncated file");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("snapshot: cannot open " + path.string());
  os.write("BPF1", 4);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(f.grid().n));
  put<double>(os, f.grid().l);
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.values().size() * sizeof(double)));
}

PhysicalField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw PreconditionError("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "BPF1", 4) != 0) throw ParseError("snapshot: bad magic");
  GridSpec grid;
  grid.n = static_cast<int>(get<std::uint64_t>(is));
  grid.l = get<double>(is);
  try {
    grid.validate();
  } catch (const ConfigurationError& e) {
    throw ParseError(std::string("snapshot: invalid header: ") + e.what());
  }
  std::vector<double> values(grid.size());
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw ParseError("snapshot: truncated sample block");
  return PhysicalField(grid, std::move(values));
}

}  // namespace betaplane
