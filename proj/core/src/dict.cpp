#include "srlab/dict.hpp"

#include "srlab/error.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

namespace srlab {

Dictionary::Dictionary(Matrix atoms, AtomNorm policy) : atoms_(std::move(atoms)), policy_(policy) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1) throw Error(Errc::empty_dictionary, "dictionary needs n >= 1 and M >= 1");
  if (!atoms_.allFinite()) throw Error(Errc::invalid_params, "dictionary has non-finite entries");
  norms_sq_ = atoms_.colwise().squaredNorm().transpose();
  inv_norms_sq_ = norms_sq_.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
  if (policy_ == AtomNorm::unit) {
    for (Index m = 0; m < norms_sq_.size(); ++m) {
      if (std::abs(norms_sq_[m] - 1.0) > kUnitTolerance) {
        throw Error(Errc::invalid_params, "atom " + std::to_string(m) + " is not unit norm", static_cast<std::size_t>(m));
      }
    }
  }
}

Dictionary Dictionary::prefix(Index count) const {
  if (count < 1 || count > size()) throw Error(Errc::index_out_of_range, "prefix size out of range");
  return Dictionary(atoms_.leftCols(count), policy_);
}

std::uint64_t RateSpec::size() const {
  if (n < 1) throw Error(Errc::invalid_params, "rate spec needs n >= 1");
  if (!std::isfinite(rate) || rate < 0.0) throw Error(Errc::invalid_params, "rate must be finite and nonnegative");
  const double exponent = static_cast<double>(n) * rate;
  if (exponent > 62.0) throw Error(Errc::size_overflow, "2^(nR) exceeds 2^62");
  const double m = std::round(std::exp2(exponent));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

std::uint64_t default_budget_bytes() {
  constexpr std::uint64_t kDefault = 2ULL << 30;
  const char* env = std::getenv("SRLAB_BUDGET_BYTES");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw Error(Errc::invalid_config, "SRLAB_BUDGET_BYTES is not an unsigned integer");
  return parsed;
}

std::uint64_t dictionary_bytes(Index n, std::uint64_t M) {
  const auto per_atom = static_cast<std::uint64_t>(n) * sizeof(double);
  if (per_atom != 0 && M > std::numeric_limits<std::uint64_t>::max() / per_atom) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return M * per_atom;
}

namespace {
constexpr std::uint64_t kDictionaryStream = 0xd1c7000000000000ULL;
}  // namespace

Dictionary random_dictionary(Index n, std::uint64_t M, Seed seed, std::uint64_t budget_bytes) {
  if (n < 1 || M < 1) throw Error(Errc::empty_dictionary, "random dictionary needs n >= 1 and M >= 1");
  const auto bytes = dictionary_bytes(n, M);
  if (bytes > budget_bytes) {
    throw Error(Errc::size_overflow, std::to_string(M) + " atoms of dimension " + std::to_string(n) + " need " +
                                         std::to_string(bytes) + " bytes, budget is " + std::to_string(budget_bytes));
  }
  // Separate stream so a dictionary and a signal drawn from the same seed are
  // unrelated.
  auto engine = make_engine(seed.derive(kDictionaryStream));
  Matrix atoms(n, static_cast<Index>(M));
  for (Index m = 0; m < atoms.cols(); ++m) {
    atoms.col(m) = sphere_vector(n, engine);
  }
  // Renormalise against the last ulp so the unit-norm check is exact.
  for (Index m = 0; m < atoms.cols(); ++m) atoms.col(m) /= atoms.col(m).norm();
  return Dictionary(std::move(atoms), AtomNorm::unit);
}

Dictionary from_rate(const RateSpec& spec, Seed seed, std::uint64_t budget_bytes) {
  return random_dictionary(spec.n, spec.size(), seed, budget_bytes);
}

Dictionary orthonormal_dictionary(Index n) {
  if (n < 1) throw Error(Errc::empty_dictionary, "orthonormal dictionary needs n >= 1");
  return Dictionary(Matrix::Identity(n, n), AtomNorm::unit);
}

}  // namespace srlab
