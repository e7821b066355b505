#include "schroflow/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>

#include "schroflow/error.hpp"

namespace schroflow::io {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(std::uint8_t(v >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(std::uint8_t(bits >> (8 * b)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= std::uint32_t(bytes_[pos_++]) << (8 * b);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t(bytes_[pos_++]) << (8 * b);
    return std::bit_cast<double>(v);
  }
  void magic() {
    need(4);
    if (std::memcmp(bytes_.data() + pos_, "SFLW", 4) != 0) {
      throw Error(ErrorKind::Io, "not a snapshot file (bad magic)");
    }
    pos_ += 4;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error(ErrorKind::Io, "truncated snapshot");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Field& u) {
  const auto& grid = u.grid();
  std::vector<std::uint8_t> out{'S', 'F', 'L', 'W'};
  put_u32(out, snapshot_version);
  put_u32(out, std::uint32_t(grid.dim()));
  put_u32(out, std::uint32_t(TargetManifold::ambient_dim));
  for (int a = 0; a < grid.dim(); ++a) put_u32(out, std::uint32_t(grid.size(a)));
  for (int a = 0; a < grid.dim(); ++a) put_f64(out, grid.length(a));
  for (const auto& v : u.values()) {
    put_f64(out, v.x);
    put_f64(out, v.y);
    put_f64(out, v.z);
  }
  return out;
}

Field decode_snapshot(std::span<const std::uint8_t> bytes, const TargetManifold& target) {
  Reader in(bytes);
  in.magic();
  if (const auto version = in.u32(); version != snapshot_version) {
    throw Error(ErrorKind::Io, "unsupported snapshot version " + std::to_string(version));
  }
  const auto m = in.u32();
  const auto k = in.u32();
  if (m < 1 || m > 2) throw Error(ErrorKind::Io, "snapshot domain dimension must be 1 or 2");
  if (k != std::uint32_t(TargetManifold::ambient_dim)) {
    throw Error(ErrorKind::Io, "snapshot ambient dimension must be 3");
  }
  std::array<int, 2> sizes{1, 1};
  std::array<double, 2> lengths{1.0, 1.0};
  for (std::uint32_t a = 0; a < m; ++a) sizes[a] = int(in.u32());
  for (std::uint32_t a = 0; a < m; ++a) lengths[a] = in.f64();
  const auto grid = m == 1 ? DomainGrid::circle(sizes[0], lengths[0])
                           : DomainGrid::torus(sizes[0], sizes[1], lengths[0], lengths[1]);
  std::vector<Vec3> values(grid.node_count());
  for (auto& v : values) {
    v.x = in.f64();
    v.y = in.f64();
    v.z = in.f64();
  }
  if (!in.done()) throw Error(ErrorKind::Io, "trailing bytes after snapshot payload");
  return Field(grid, target, std::move(values));
}

void write_snapshot(const std::filesystem::path& path, const Field& u) {
  const auto bytes = encode_snapshot(u);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

Field read_snapshot(const std::filesystem::path& path, const TargetManifold& target) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, target);
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_reports_csv(std::ostream& out, std::span<const norms::NormReport> reports) {
  const std::size_t k = reports.empty() ? 0 : reports.front().h_norms.size();
  out << "t,energy,sup_grad";
  for (std::size_t l = 0; l < k; ++l) out << ",h" << l;
  for (std::size_t l = 0; l < k; ++l) out << ",w" << l;
  out << ",drift\n";
  for (const auto& r : reports) {
    out << format_double(r.time) << ',' << format_double(r.energy) << ','
        << format_double(r.sup_grad);
    for (double h : r.h_norms) out << ',' << format_double(h);
    for (double w : r.w_norms) out << ',' << format_double(w);
    out << ',' << format_double(r.constraint_drift) << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace schroflow::io
