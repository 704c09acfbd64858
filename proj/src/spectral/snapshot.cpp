#include "visco/spectral/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "visco/errors.hpp"

namespace visco {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("snapshot: truncated file");
  return v;
}

std::uint32_t rank_code(int comps) {
  switch (comps) {
    case 1: return 0;
    case 3: return 1;
    case 9: return 2;
  }
  throw Error("snapshot: unsupported component count");
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& f, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("snapshot: cannot open " + path.string());
  out.write("VTRS", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, f.grid().n1);
  put<std::uint32_t>(out, f.grid().n2);
  put<std::uint32_t>(out, f.grid().n3);
  put<std::uint32_t>(out, rank_code(f.comps()));
  put<double>(out, time);
  auto d = f.data();
  out.write(reinterpret_cast<const char*>(d.data()), std::streamsize(d.size() * sizeof(double)));
  out.flush();
  if (!out) throw Error("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, Dealias dealias) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("snapshot: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VTRS", 4) != 0) throw Error("snapshot: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw Error("snapshot: unsupported version");
  const int n1 = int(get<std::uint32_t>(in));
  const int n2 = int(get<std::uint32_t>(in));
  const int n3 = int(get<std::uint32_t>(in));
  const auto rank = get<std::uint32_t>(in);
  if (rank > 2) throw Error("snapshot: bad rank");
  const int comps = rank == 0 ? 1 : rank == 1 ? 3 : 9;
  Snapshot snap{Field(Grid(n1, n2, n3, dealias), comps), get<double>(in)};
  auto d = snap.field.data();
  in.read(reinterpret_cast<char*>(d.data()), std::streamsize(d.size() * sizeof(double)));
  if (!in) throw Error("snapshot: truncated data");
  return snap;
}

}  // namespace visco
