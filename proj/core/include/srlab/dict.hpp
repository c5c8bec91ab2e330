#pragma once

#include "srlab/core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace srlab {

enum class AtomNorm {
  unit,  // every atom must have unit norm within 1e-12
  any,   // arbitrary (nonzero or zero) atoms; test fixtures only
};

/// An ordered collection of M atoms in R^n, stored as the columns of an
/// n x M matrix. Immutable after construction; indices are 0-based.
class Dictionary {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  /// Throws empty_dictionary when M == 0 or n == 0, invalid_params when a
  /// unit-norm dictionary has an atom off the unit sphere.
  explicit Dictionary(Matrix atoms, AtomNorm policy = AtomNorm::unit);

  Index dim() const noexcept { return atoms_.rows(); }
  Index size() const noexcept { return atoms_.cols(); }

  auto atom(Index m) const { return atoms_.col(m); }
  const Matrix& atoms() const noexcept { return atoms_; }
  const Vector& norms_sq() const noexcept { return norms_sq_; }
  /// 1/||phi(m)||^2, or 0 for a zero atom.
  const Vector& inv_norms_sq() const noexcept { return inv_norms_sq_; }
  AtomNorm policy() const noexcept { return policy_; }

  Dictionary prefix(Index count) const;

 private:
  Matrix atoms_;
  Vector norms_sq_;
  Vector inv_norms_sq_;
  AtomNorm policy_;
};

/// Dictionary size exponent: M = round(2^{n R}).
struct RateSpec {
  Index n = 1;
  double rate = 0.0;  // bits per dimension

  /// Throws invalid_params for n < 1 or a negative/non-finite rate,
  /// size_overflow when the size does not fit in 62 bits.
  std::uint64_t size() const;
};

/// 2 GiB unless SRLAB_BUDGET_BYTES is set.
std::uint64_t default_budget_bytes();

/// Bytes needed to hold M atoms of dimension n as float64.
std::uint64_t dictionary_bytes(Index n, std::uint64_t M);

/// M independent atoms uniform on the unit sphere. Throws size_overflow when
/// the dense matrix exceeds `budget_bytes`.
Dictionary random_dictionary(Index n, std::uint64_t M, Seed seed, std::uint64_t budget_bytes = default_budget_bytes());

Dictionary from_rate(const RateSpec& spec, Seed seed, std::uint64_t budget_bytes = default_budget_bytes());

/// The n standard basis vectors.
Dictionary orthonormal_dictionary(Index n);

/// Generation parameters recorded in the JSON sidecar.
struct DictionaryInfo {
  std::string generator = "random";  // random | orthonormal | external
  Index n = 0;
  std::uint64_t size = 0;
  std::uint64_t seed = 0;
  std::optional<double> rate;
};

/// Writes the flat binary file (magic "SRLD", u32 version, u32 n, u64 M,
/// little-endian, then M*n float64 by atom) and `<path>.json`.
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict, const DictionaryInfo& info);

/// Reads the binary file. Atoms are accepted with AtomNorm::any if any of
/// them is off the unit sphere.
Dictionary load_dictionary(const std::filesystem::path& path);

/// Reads `<path>.json`.
DictionaryInfo load_dictionary_info(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace srlab
