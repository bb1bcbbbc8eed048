#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wtrace/operators.hpp"

namespace wtrace::cache {

/// 64-bit FNV-1a of a canonical parameter string.
std::uint64_t content_hash(std::string_view canonical);

/// Canonical description of a d = 1 construction. Symbols are identified by
/// name, so custom symbols must carry distinct names.
std::string nystrom_key(std::string_view variant, double alpha, const geom::IntervalUnion& lambda,
                        const geom::IntervalUnion& omega, const ScalarSymbol& a,
                        const ops::NystromOptions& opt);

/// Binary store of spectra and operators under `dir`, one file per hash.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  std::optional<ops::Spectrum> load_spectrum(std::string_view key) const;
  void store_spectrum(std::string_view key, const ops::Spectrum& spec) const;

  std::optional<ops::DiscreteOperator> load_operator(std::string_view key) const;
  void store_operator(std::string_view key, const ops::DiscreteOperator& op) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path file(std::string_view key, std::string_view ext) const;
  std::filesystem::path dir_;
};

/// CSV with columns index,eigenvalue.
void write_spectrum_csv(const std::filesystem::path& path, const ops::Spectrum& spec);

}  // namespace wtrace::cache
