#include "nsrel/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "nsrel/errors.hpp"

namespace nsrel {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'R', 'E', 'L', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void u32(std::uint32_t v) { le(v, 4); }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v), 4); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  const std::vector<unsigned char>& data() const { return buf_; }

private:
  void le(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) buf_.push_back(static_cast<unsigned char>(v >> (8 * k)));
  }
  std::vector<unsigned char> buf_;
};

class Reader {
public:
  explicit Reader(std::vector<unsigned char> data) : buf_(std::move(data)) {}
  void bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(le(8)); }
  bool at_end() const { return pos_ == buf_.size(); }

private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw IoError("checkpoint truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(buf_[pos_ + k]) << (8 * k);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::vector<unsigned char> buf_;
  std::size_t pos_ = 0;
};

std::uint32_t encode(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::NoSlip: return 0;
    case BoundaryKind::NavierSlip: return 1;
    case BoundaryKind::Periodic: return 2;
  }
  return 0;
}

BoundaryKind decode(std::uint32_t v) {
  switch (v) {
    case 0: return BoundaryKind::NoSlip;
    case 1: return BoundaryKind::NavierSlip;
    case 2: return BoundaryKind::Periodic;
    default: throw IoError("checkpoint: unknown boundary code " + std::to_string(v));
  }
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const State& s, const FluidParams& params,
                      const std::string& config_hash) {
  params.validate();
  const Grid& g = s.rho.grid();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(g.dim()));
  w.i32(g.cells(0));
  w.i32(g.cells(1));
  w.f64(g.spacing(0));
  w.f64(g.spacing(1));
  w.f64(g.origin(0));
  w.f64(g.origin(1));
  for (int side = 0; side < 4; ++side) w.u32(encode(g.boundary(static_cast<Side>(side))));
  w.f64(s.time);
  for (double v : {params.visc.mu, params.visc.eta, params.visc.beta, params.law->coefficient(),
                   params.law->gamma(), params.law->rho_bar(), params.cfl})
    w.f64(v);
  for (double v : s.rho.values()) w.f64(v);
  for (int c = 0; c < g.dim(); ++c)
    for (double v : s.u.component(c)) w.f64(v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(w.data().data()),
            static_cast<std::streamsize>(w.data().size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());

  std::filesystem::path side = path;
  side += ".txt";
  std::ofstream txt(side, std::ios::trunc);
  if (!txt) throw IoError("cannot open checkpoint sidecar: " + side.string());
  txt << "config_hash = " << config_hash << "\n"
      << "format_version = " << kVersion << "\n"
      << "dim = " << g.dim() << "\n"
      << "cells = " << g.cells(0) << " " << g.cells(1) << "\n"
      << "time = " << s.time << "\n";
  if (!txt) throw IoError("failed writing checkpoint sidecar: " + side.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  Reader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));

  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError("not a checkpoint: " + path.string());
  if (r.u32() != kVersion) throw IoError("unsupported checkpoint version");
  const int dim = static_cast<int>(r.u32());
  const std::array<int, 2> cells{r.i32(), r.i32()};
  const std::array<double, 2> spacing{r.f64(), r.f64()};
  const std::array<double, 2> origin{r.f64(), r.f64()};
  std::array<BoundaryKind, 4> bc{};
  for (auto& b : bc) b = decode(r.u32());
  const double time = r.f64();
  FluidParams params;
  params.visc.mu = r.f64();
  params.visc.eta = r.f64();
  params.visc.beta = r.f64();
  const double a = r.f64(), gamma = r.f64(), rho_bar = r.f64();
  params.cfl = r.f64();

  Grid grid = [&] {
    try {
      return Grid(dim, cells, spacing, origin, bc);
    } catch (const std::exception& e) {
      throw IoError(std::string("checkpoint grid header invalid: ") + e.what());
    }
  }();
  params.law = std::make_shared<IsentropicLaw>(a, gamma, rho_bar);

  ScalarField rho(grid);
  for (auto& v : rho.values()) v = r.f64();
  VectorField u(grid);
  for (int c = 0; c < dim; ++c)
    for (auto& v : u.component(c)) v = r.f64();
  if (!r.at_end()) throw IoError("checkpoint has trailing bytes");

  std::string hash;
  std::filesystem::path side = path;
  side += ".txt";
  std::ifstream txt(side);
  for (std::string line; std::getline(txt, line);)
    if (line.rfind("config_hash = ", 0) == 0) hash = line.substr(14);

  return Checkpoint{State(time, std::move(rho), std::move(u)), params, hash};
}

}  // namespace nsrel
