#include "wtrace/cache.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wtrace/io.hpp"

namespace wtrace::cache {

namespace {

constexpr char kSpectrumMagic[8] = {'W', 'T', 'S', 'P', 'E', 'C', '1', '\0'};
constexpr char kOperatorMagic[8] = {'W', 'T', 'O', 'P', 'E', 'R', '1', '\0'};

struct Writer {
  std::string buf;
  template <class T>
  void put(const T& v) {
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); }
  void put_string(std::string_view s) {
    put<std::uint64_t>(s.size());
    buf.append(s);
  }
};

struct Reader {
  std::string buf;
  std::size_t pos = 0;
  bool ok = true;
  template <class T>
  T get() {
    T v{};
    get_bytes(&v, sizeof(T));
    return v;
  }
  void get_bytes(void* p, std::size_t n) {
    if (pos + n > buf.size()) {
      ok = false;
      return;
    }
    std::memcpy(p, buf.data() + pos, n);
    pos += n;
  }
  std::string get_string() {
    const auto n = get<std::uint64_t>();
    if (!ok || pos + n > buf.size()) {
      ok = false;
      return {};
    }
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

std::optional<Reader> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return Reader{os.str()};
}

void put_intervals(std::ostringstream& os, const geom::IntervalUnion& u) {
  os << "[";
  for (const auto& iv : u.intervals) os << "(" << io::format_double(iv.left) << "," << io::format_double(iv.right) << ")";
  os << "]";
}

}  // namespace

std::uint64_t content_hash(std::string_view canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string nystrom_key(std::string_view variant, double alpha, const geom::IntervalUnion& lambda,
                        const geom::IntervalUnion& omega, const ScalarSymbol& a,
                        const ops::NystromOptions& opt) {
  std::ostringstream os;
  os << "nystrom_1d;" << variant << ";alpha=" << io::format_double(alpha) << ";lambda=";
  put_intervals(os, lambda);
  os << ";omega=";
  put_intervals(os, omega);
  os << ";a=" << a.name() << ";ppw=" << io::format_double(opt.points_per_wavelength)
     << ";panel_periods=" << io::format_double(opt.panel_periods);
  return os.str();
}

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path Store::file(std::string_view key, std::string_view ext) const {
  std::ostringstream name;
  name << std::hex << std::setw(16) << std::setfill('0') << content_hash(key) << ext;
  return dir_ / name.str();
}

void Store::store_spectrum(std::string_view key, const ops::Spectrum& spec) const {
  Writer w;
  w.put_bytes(kSpectrumMagic, sizeof kSpectrumMagic);
  w.put_string(key);
  w.put(spec.alpha);
  w.put<std::uint64_t>(spec.eigenvalues.size());
  w.put_bytes(spec.eigenvalues.data(), spec.eigenvalues.size() * sizeof(double));
  io::atomic_write(file(key, ".spec"), w.buf);
}

std::optional<ops::Spectrum> Store::load_spectrum(std::string_view key) const {
  auto r = slurp(file(key, ".spec"));
  if (!r) return std::nullopt;
  char magic[8];
  r->get_bytes(magic, sizeof magic);
  if (!r->ok || std::memcmp(magic, kSpectrumMagic, sizeof magic) != 0) return std::nullopt;
  if (r->get_string() != key || !r->ok) return std::nullopt;  // hash collision or stale file
  ops::Spectrum s;
  s.alpha = r->get<double>();
  const auto n = r->get<std::uint64_t>();
  if (!r->ok || n > (r->buf.size() - r->pos) / sizeof(double)) return std::nullopt;
  s.eigenvalues.resize(n);
  r->get_bytes(s.eigenvalues.data(), n * sizeof(double));
  if (!r->ok) return std::nullopt;
  return s;
}

void Store::store_operator(std::string_view key, const ops::DiscreteOperator& op) const {
  Writer w;
  w.put_bytes(kOperatorMagic, sizeof kOperatorMagic);
  w.put_string(key);
  w.put<std::int32_t>(static_cast<std::int32_t>(op.construction));
  w.put<std::uint8_t>(op.is_complex);
  w.put<std::uint8_t>(op.hermitian);
  w.put(op.alpha);
  const auto n = static_cast<std::uint64_t>(op.dim());
  w.put(n);
  if (op.is_complex) {
    w.put_bytes(op.complex.data(), n * n * sizeof(std::complex<double>));
  } else {
    w.put_bytes(op.real.data(), n * n * sizeof(double));
  }
  w.put<std::uint64_t>(static_cast<std::uint64_t>(op.nodes.size()));
  w.put_bytes(op.nodes.data(), op.nodes.size() * sizeof(double));
  w.put_bytes(op.weights.data(), op.weights.size() * sizeof(double));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(op.sites.rows()));
  w.put_bytes(op.sites.data(), op.sites.size() * sizeof(int));
  io::atomic_write(file(key, ".op"), w.buf);
}

std::optional<ops::DiscreteOperator> Store::load_operator(std::string_view key) const {
  auto r = slurp(file(key, ".op"));
  if (!r) return std::nullopt;
  char magic[8];
  r->get_bytes(magic, sizeof magic);
  if (!r->ok || std::memcmp(magic, kOperatorMagic, sizeof magic) != 0) return std::nullopt;
  if (r->get_string() != key || !r->ok) return std::nullopt;
  ops::DiscreteOperator op;
  op.construction = static_cast<ops::Construction>(r->get<std::int32_t>());
  op.is_complex = r->get<std::uint8_t>() != 0;
  op.hermitian = r->get<std::uint8_t>() != 0;
  op.alpha = r->get<double>();
  const auto n = r->get<std::uint64_t>();
  const std::size_t elem = op.is_complex ? sizeof(std::complex<double>) : sizeof(double);
  if (!r->ok || n * n > (r->buf.size() - r->pos) / elem) return std::nullopt;
  const auto en = static_cast<Eigen::Index>(n);
  if (op.is_complex) {
    op.complex.resize(en, en);
    r->get_bytes(op.complex.data(), n * n * elem);
  } else {
    op.real.resize(en, en);
    r->get_bytes(op.real.data(), n * n * elem);
  }
  const auto nn = static_cast<Eigen::Index>(r->get<std::uint64_t>());
  if (!r->ok || nn < 0 || static_cast<std::size_t>(nn) > r->buf.size()) return std::nullopt;
  op.nodes.resize(nn);
  op.weights.resize(nn);
  r->get_bytes(op.nodes.data(), nn * sizeof(double));
  r->get_bytes(op.weights.data(), nn * sizeof(double));
  const auto ns = static_cast<Eigen::Index>(r->get<std::uint64_t>());
  if (!r->ok || static_cast<std::size_t>(ns) > r->buf.size()) return std::nullopt;
  op.sites.resize(ns, 2);
  r->get_bytes(op.sites.data(), ns * 2 * sizeof(int));
  if (!r->ok) return std::nullopt;
  return op;
}

void write_spectrum_csv(const std::filesystem::path& path, const ops::Spectrum& spec) {
  std::string out = "index,eigenvalue\n";
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
    out += std::to_string(i) + "," + io::format_double(spec.eigenvalues[i]) + "\n";
  io::atomic_write(path, out);
}

}  // namespace wtrace::cache
