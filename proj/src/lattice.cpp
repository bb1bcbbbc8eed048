#include <array>
#include <optional>
#include <cmath>
#include <numbers>

#include "wtrace/error.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/parallel.hpp"

namespace wtrace::ops {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

void check_brillouin(const geom::Domain& sea) {
  require(sea.dimension() == 2 && sea.bounded(), "fermion correlation: Fermi sea must be a bounded 2-D domain");
  const auto [lo, hi] = geom::bounding_box(sea);
  for (int c = 0; c < 2; ++c)
    if (!(lo(c) > -kPi && hi(c) < kPi))
      throw PreconditionError("fermion correlation: Fermi sea exceeds the Brillouin zone (-pi, pi)^2");
}

cd disk_entry(const geom::DiskShape& disk, int dx, int dy) {
  const double kf = disk.radius;
  const double r = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
  const double base = r == 0.0 ? kf * kf / (4.0 * kPi) : kf * std::cyl_bessel_j(1.0, kf * r) / (2.0 * kPi * r);
  return base * std::polar(1.0, disk.center(0) * dx + disk.center(1) * dy);
}

// Volume rule fine enough for e^{i xi . d} with |d| <= reach.
geom::VolumeRule oscillatory_rule(const geom::Domain& sea, double reach) {
  const auto [lo, hi] = geom::bounding_box(sea);
  const double extent = (hi - lo).maxCoeff();
  const int n = std::max(48, static_cast<int>(std::ceil(0.6 * reach * extent)) + 24);
  return geom::volume_rule(sea, n, n);
}

cd rule_entry(const geom::VolumeRule& rule, int dx, int dy) {
  cd acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::Index i = static_cast<Eigen::Index>(q);
    acc += rule.weights(i) * std::polar(1.0, rule.points(i, 0) * dx + rule.points(i, 1) * dy);
  }
  return acc / (4.0 * kPi * kPi);
}

}  // namespace

Eigen::MatrixXi lattice_sites(const geom::Domain& region, double L) {
  require(L > 0.0, "lattice_sites: L must be positive");
  require(region.dimension() == 2 && region.bounded(), "lattice_sites: region must be a bounded 2-D domain");
  const auto [lo, hi] = geom::bounding_box(region);
  std::vector<std::array<int, 2>> sites;
  const int i0 = static_cast<int>(std::floor(L * lo(0))), i1 = static_cast<int>(std::ceil(L * hi(0)));
  const int j0 = static_cast<int>(std::floor(L * lo(1))), j1 = static_cast<int>(std::ceil(L * hi(1)));
  geom::Vec p(2);
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) {
      p << i / L, j / L;
      if (geom::contains(region, p)) sites.push_back({i, j});
    }
  Eigen::MatrixXi out(static_cast<Eigen::Index>(sites.size()), 2);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    out(static_cast<Eigen::Index>(k), 0) = sites[k][0];
    out(static_cast<Eigen::Index>(k), 1) = sites[k][1];
  }
  return out;
}

std::complex<double> fermion_correlation(const geom::Domain& fermi_sea, int dx, int dy) {
  check_brillouin(fermi_sea);
  if (auto disk = geom::as_disk(fermi_sea)) return disk_entry(*disk, dx, dy);
  return rule_entry(oscillatory_rule(fermi_sea, std::hypot(dx, dy)), dx, dy);
}

DiscreteOperator build_fermion_correlation_2d(const Eigen::MatrixXi& sites, const geom::Domain& fermi_sea,
                                              std::size_t max_dim, int threads) {
  require(sites.rows() > 0 && sites.cols() == 2, "fermion correlation: empty site list");
  check_brillouin(fermi_sea);
  const Eigen::Index n = sites.rows();
  if (static_cast<std::size_t>(n) > max_dim)
    throw PreconditionError("fermion correlation: " + std::to_string(n) + " sites exceed the memory cap " +
                            std::to_string(max_dim));
  const unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : default_threads();

  // One entry per displacement, tabulated on the full difference box.
  const int sx = sites.col(0).maxCoeff() - sites.col(0).minCoeff();
  const int sy = sites.col(1).maxCoeff() - sites.col(1).minCoeff();
  const int wx = 2 * sx + 1, wy = 2 * sy + 1;
  std::vector<cd> table(static_cast<std::size_t>(wx) * wy);
  const auto disk = geom::as_disk(fermi_sea);
  std::optional<geom::VolumeRule> rule;
  if (!disk) rule = oscillatory_rule(fermi_sea, std::hypot(sx, sy));
  parallel_for(static_cast<std::size_t>(wx), workers, [&](std::size_t ix) {
    const int dx = static_cast<int>(ix) - sx;
    for (int dy = -sy; dy <= sy; ++dy) {
      table[ix * wy + (dy + sy)] = disk ? disk_entry(*disk, dx, dy) : rule_entry(*rule, dx, dy);
    }
  });
  auto entry = [&](Eigen::Index i, Eigen::Index j) {
    const int dx = sites(i, 0) - sites(j, 0), dy = sites(i, 1) - sites(j, 1);
    return table[static_cast<std::size_t>(dx + sx) * wy + (dy + sy)];
  };

  DiscreteOperator op;
  op.construction = Construction::lattice_fermion_2d;
  op.sites = sites;
  bool real = true;
  for (const cd& v : table) real = real && std::fabs(v.imag()) <= 1e-15 * std::abs(table[table.size() / 2]);
  op.is_complex = !real;
  if (real) {
    op.real.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t jj) {
      const Eigen::Index j = static_cast<Eigen::Index>(jj);
      for (Eigen::Index i = j; i < n; ++i) op.real(i, j) = op.real(j, i) = entry(i, j).real();
    });
  } else {
    op.complex.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t jj) {
      const Eigen::Index j = static_cast<Eigen::Index>(jj);
      for (Eigen::Index i = j; i < n; ++i) {
        const cd v = entry(i, j);
        op.complex(i, j) = v;
        op.complex(j, i) = std::conj(v);
      }
    });
    op.complex.diagonal() = op.complex.diagonal().real().cast<cd>();
  }
  return op;
}

}  // namespace wtrace::ops
