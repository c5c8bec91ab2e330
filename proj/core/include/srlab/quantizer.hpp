#pragma once

// Quantisation of k-term representations: orthonormal coordinates of the
// projection onto the selected atoms, scalar quantisation of those
// coordinates on a uniform grid, and random-codebook quantisation of the
// whole coefficient vector.

#include "srlab/approx.hpp"
#include "srlab/core.hpp"
#include "srlab/dict.hpp"

#include <cstdint>
#include <vector>

namespace srlab {

/// yhat = sum_i lambdas[i] * basis.col(i), with an orthonormal basis for the
/// span of the selected atoms (Gram-Schmidt order = selection order).
struct OrthoRep {
  Matrix basis;
  Vector lambdas;
  Vector projection;  // yhat

  Index sparsity() const noexcept { return lambdas.size(); }
};

/// Orthonormalises the columns of `atoms` in order. Throws rank_deficient
/// with the offending column index when a column is numerically in the span
/// of the earlier ones (residual norm <= 1e-10 of its norm).
Matrix gram_schmidt(const Matrix& atoms);

/// Throws rank_deficient on repeated or dependent atoms.
OrthoRep ortho_decompose(const Signal& y, const SparseRep& rep, const Dictionary& dict);

/// Coordinates on the grid {-1, -(l-1)/l, ..., 0, ..., 1}.
struct QuantizedRep {
  std::vector<int> levels;  // lambdas_q = levels / l
  Vector lambdas_q;
  double step = 1.0;
  Vector recon_q;  // yhat'

  double error_sq(const OrthoRep& o) const { return (o.projection - recon_q).squaredNorm(); }
};

/// Nearest grid point, ties toward zero, clamped to [-1, 1]. Requires l >= 1.
int quantize_level(double lambda, int l);

QuantizedRep scalar_quantize(const OrthoRep& o, int l);

/// |<y - yhat, yhat - yhat'>|.
double check_orthogonality(const Signal& y, const OrthoRep& o, const QuantizedRep& q);

enum class CoveringRule {
  gain_shape,  // best scaled codeword (optimal gain, not counted in b)
  nearest,     // nearest codeword, no scaling
};

struct CoveringRep {
  std::uint64_t codeword = 0;
  double gain = 1.0;
  Vector lambdas_q;
  Vector recon_q;
  double error_sq = 0.0;
  double target = 0.0;  // 2^{-2b/k}
  unsigned bits = 0;
};

/// Random codebook of 2^b points uniform in the unit ball of R^k.
Matrix covering_codebook(Index k, unsigned bits, Seed seed, std::uint64_t budget_bytes = default_budget_bytes());

/// Quantises the coefficient vector with a random codebook of 2^bits points.
/// Throws size_overflow when the codebook exceeds the memory budget.
CoveringRep subspace_covering_quantize(const OrthoRep& o, unsigned bits, Seed seed,
                                       CoveringRule rule = CoveringRule::gain_shape,
                                       std::uint64_t budget_bytes = default_budget_bytes());

CoveringRep subspace_covering_quantize(const OrthoRep& o, const Matrix& codebook, CoveringRule rule);

/// C(M, k) * (2l + 1)^k, the number of (support, grid point) descriptions.
/// Saturates at UINT64_MAX.
std::uint64_t description_count(std::uint64_t M, std::uint64_t k, int l);
double log2_description_count(std::uint64_t M, std::uint64_t k, int l);

/// Counts distinct (support, levels) pairs by explicit enumeration.
std::uint64_t enumerate_descriptions(std::uint64_t M, std::uint64_t k, int l);

/// Step schedule l = ceil(f / sqrt(d)) with f = sqrt(n), the choice that
/// trades quantisation error against description length in the converse.
int step_schedule(Index n, double average_distortion);

}  // namespace srlab
