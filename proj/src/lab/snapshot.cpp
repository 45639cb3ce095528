#include "lab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "common/error.hpp"

namespace bpl {
namespace {

constexpr char kMagic[4] = {'B', 'P', 'L', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 3 * 8;

template <class U>
void put(std::vector<unsigned char>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) { put(out, std::bit_cast<std::uint64_t>(x)); }

template <class U>
U get(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get<std::uint64_t>(p)); }

}  // namespace

std::vector<unsigned char> encode_snapshot(const State& s) {
  const std::size_t n = static_cast<std::size_t>(s.grid().n());
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 16 * n * n);
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_f64(out, s.t);
  put_f64(out, s.mu);
  put_f64(out, s.kappa.epsilon0);
  for (double v : s.omega.values()) put_f64(out, v);
  for (double v : s.theta.values()) put_f64(out, v);
  return out;
}

State decode_snapshot(const std::vector<unsigned char>& bytes, KappaKind kappa_hint) {
  if (bytes.size() < 4) fail(ErrorCode::Truncated, "snapshot shorter than its magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorCode::BadMagic, "not a BPL1 snapshot (bad magic)");
  if (bytes.size() < kHeaderBytes) fail(ErrorCode::Truncated, "snapshot header truncated");
  const unsigned char* p = bytes.data() + 4;
  const auto version = get<std::uint32_t>(p);
  if (version != kSnapshotVersion)
    fail(ErrorCode::VersionMismatch, "snapshot version " + std::to_string(version) + " (expected " +
                                         std::to_string(kSnapshotVersion) + ")");
  const auto n = get<std::uint32_t>(p + 4);
  if (n < 16 || !std::has_single_bit(n) || n > (1u << 14))
    fail(ErrorCode::InvalidArgument, "snapshot grid size " + std::to_string(n) + " is not a supported power of two");
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  const std::size_t expect = kHeaderBytes + 16 * cells;
  if (bytes.size() < expect) fail(ErrorCode::Truncated, "snapshot data truncated");
  if (bytes.size() > expect) fail(ErrorCode::Io, "snapshot has trailing bytes");

  const Grid2D g(static_cast<int>(n));
  State s{get_f64(p + 8), ScalarField(g), ScalarField(g), get_f64(p + 16), KappaProfile{}};
  const double eps0 = get_f64(p + 24);
  if (kappa_hint == KappaKind::Constant && eps0 != 0.0)
    fail(ErrorCode::InvalidArgument, "snapshot has epsilon0 != 0 but a constant kappa was requested");
  s.kappa = KappaProfile::make(kappa_hint, eps0);
  const unsigned char* data = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < cells; ++i) s.omega[i] = get_f64(data + 8 * i);
  for (std::size_t i = 0; i < cells; ++i) s.theta[i] = get_f64(data + 8 * (cells + i));
  return s;
}

void save_snapshot(const State& s, const std::string& path) {
  const std::vector<unsigned char> bytes = encode_snapshot(s);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot write snapshot '" + path + "'");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::Io, "write failed for snapshot '" + path + "'");
}

State load_snapshot(const std::string& path, KappaKind kappa_hint) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open snapshot '" + path + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, kappa_hint);
}

}  // namespace bpl
