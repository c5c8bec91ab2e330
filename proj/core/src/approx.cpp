#include "srlab/approx.hpp"

#include "srlab/error.hpp"

#include <cmath>
#include <string>

namespace srlab {

namespace {

void check_inputs(const Signal& y, const Dictionary& dict) {
  if (dict.size() < 1) throw Error(Errc::empty_dictionary, "dictionary has no atoms");
  if (y.dim() != dict.dim()) {
    throw Error(Errc::dimension_mismatch,
                "signal has dimension " + std::to_string(y.dim()) + ", dictionary " + std::to_string(dict.dim()));
  }
}

// Largest normalised squared correlation; smallest index wins ties. Zero
// atoms score 0 and are only chosen when everything scores 0.
template <typename Corr>
Index pick_atom(const Corr& corr, const Vector& inv_norms_sq) {
  Index best = 0;
  double best_score = corr[0] * corr[0] * inv_norms_sq[0];
  for (Index m = 1; m < corr.size(); ++m) {
    const double score = corr[m] * corr[m] * inv_norms_sq[m];
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

struct Stage {
  Index index = 0;
  double coeff = 0.0;
};

// One matching pursuit step on `z` (updated in place).
template <typename Residual>
Stage greedy_step(Residual&& z, Index m, const Dictionary& dict) {
  const double c = dict.atom(m).dot(z);
  const double x = c * dict.inv_norms_sq()[m];
  z -= x * dict.atom(m);
  return {m, x};
}

}  // namespace

bool ResidualTrace::nonincreasing(double slack) const noexcept {
  for (std::size_t j = 1; j < energies.size(); ++j) {
    if (energies[j] > energies[j - 1] + slack) return false;
  }
  return true;
}

SparseRep best_singleton(const Signal& y, const Dictionary& dict) {
  check_inputs(y, dict);
  auto result = successive_represent(y, dict, 1);
  return std::move(result.rep);
}

Representation successive_represent(const Signal& y, const Dictionary& dict, std::size_t k) {
  check_inputs(y, dict);
  if (k < 1) throw Error(Errc::invalid_params, "sparsity k must be >= 1");

  Representation out;
  auto& rep = out.rep;
  rep.indices.reserve(k);
  rep.coeffs.reserve(k);
  rep.recon = Vector::Zero(y.dim());
  out.trace.energies.reserve(k + 1);

  Vector z = y.values();
  out.trace.energies.push_back(z.squaredNorm());
  for (std::size_t stage = 0; stage < k; ++stage) {
    if (out.trace.energies.back() <= kZeroResidual) {
      rep.indices.push_back(0);
      rep.coeffs.push_back(0.0);
      out.trace.energies.push_back(out.trace.energies.back());
      continue;
    }
    const Vector corr = dict.atoms().transpose() * z;
    const Stage s = greedy_step(z, pick_atom(corr, dict.inv_norms_sq()), dict);
    rep.indices.push_back(s.index);
    rep.coeffs.push_back(s.coeff);
    rep.recon += s.coeff * dict.atom(s.index);
    out.trace.energies.push_back(z.squaredNorm());
  }
  rep.residual_sq = out.trace.energies.back();
  return out;
}

std::vector<ResidualTrace> successive_traces(const Matrix& signals, const Dictionary& dict, std::size_t k) {
  if (signals.rows() != dict.dim()) throw Error(Errc::dimension_mismatch, "signal block does not match dictionary");
  const Index batch = signals.cols();
  std::vector<ResidualTrace> traces(static_cast<std::size_t>(batch));
  Matrix z = signals;
  for (Index b = 0; b < batch; ++b) {
    traces[b].energies.reserve(k + 1);
    traces[b].energies.push_back(z.col(b).squaredNorm());
  }
  Matrix corr(dict.size(), batch);
  for (std::size_t stage = 0; stage < k; ++stage) {
    corr.noalias() = dict.atoms().transpose() * z;
    for (Index b = 0; b < batch; ++b) {
      auto& energies = traces[b].energies;
      if (energies.back() <= kZeroResidual) {
        energies.push_back(energies.back());
        continue;
      }
      greedy_step(z.col(b), pick_atom(corr.col(b), dict.inv_norms_sq()), dict);
      energies.push_back(z.col(b).squaredNorm());
    }
  }
  return traces;
}

Representation omp_represent(const Signal& y, const Dictionary& dict, std::size_t k) {
  check_inputs(y, dict);
  if (k < 1) throw Error(Errc::invalid_params, "sparsity k must be >= 1");

  const Index n = y.dim();
  const Index max_atoms = std::min<Index>(static_cast<Index>(k), n);
  Matrix q(n, max_atoms);     // orthonormal basis of the selected atoms
  Matrix r = Matrix::Zero(max_atoms, max_atoms);  // atoms = q * r
  std::vector<Index> selected;
  std::vector<char> rejected(static_cast<std::size_t>(dict.size()), 0);

  Representation out;
  auto& rep = out.rep;
  Vector z = y.values();
  Vector coeffs;
  Vector recon = Vector::Zero(n);
  out.trace.energies.push_back(z.squaredNorm());

  for (std::size_t stage = 0; stage < k; ++stage) {
    const auto s = static_cast<Index>(selected.size());
    bool added = false;
    if (out.trace.energies.back() > kZeroResidual && s < max_atoms) {
      const Vector corr = dict.atoms().transpose() * z;
      std::fill(rejected.begin(), rejected.end(), 0);
      for (Index m : selected) rejected[static_cast<std::size_t>(m)] = 1;
      for (;;) {
        Index best = -1;
        double best_score = -1.0;
        for (Index m = 0; m < corr.size(); ++m) {
          if (rejected[static_cast<std::size_t>(m)]) continue;
          const double score = corr[m] * corr[m] * dict.inv_norms_sq()[m];
          if (score > best_score) {
            best_score = score;
            best = m;
          }
        }
        if (best < 0 || best_score <= 0.0) break;

        // Two passes of classical Gram-Schmidt keep q orthonormal to working
        // precision.
        const double atom_norm = std::sqrt(dict.norms_sq()[best]);
        Vector v = dict.atom(best);
        Vector proj = Vector::Zero(s);
        for (int pass = 0; pass < 2 && s > 0; ++pass) {
          const Vector h = q.leftCols(s).transpose() * v;
          v -= q.leftCols(s) * h;
          proj += h;
        }
        const double rest = v.norm();
        if (rest <= kRankTolerance * atom_norm) {
          rejected[static_cast<std::size_t>(best)] = 1;
          continue;
        }
        q.col(s) = v / rest;
        r.block(0, s, s, 1) = proj;
        r(s, s) = rest;
        selected.push_back(best);
        added = true;
        break;
      }
    }

    if (!added) {
      rep.indices.push_back(0);
      rep.coeffs.push_back(0.0);
      out.trace.energies.push_back(out.trace.energies.back());
      continue;
    }

    const auto size = static_cast<Index>(selected.size());
    if (size == 1) {
      // Same arithmetic as the singleton step so k = 1 agrees exactly.
      const Index m = selected.front();
      coeffs = Vector::Constant(1, dict.atom(m).dot(y.values()) * dict.inv_norms_sq()[m]);
    } else {
      const Vector qty = q.leftCols(size).transpose() * y.values();
      coeffs = r.topLeftCorner(size, size).triangularView<Eigen::Upper>().solve(qty);
    }
    recon.setZero();
    for (Index i = 0; i < size; ++i) recon += coeffs[i] * dict.atom(selected[static_cast<std::size_t>(i)]);
    z = y.values() - recon;
    out.trace.energies.push_back(z.squaredNorm());
    rep.indices.push_back(selected.back());
    rep.coeffs.push_back(0.0);
  }

  // Added stages form a prefix; the padded tail keeps coefficient 0.
  for (std::size_t i = 0; i < selected.size(); ++i) rep.coeffs[i] = coeffs[static_cast<Index>(i)];
  rep.recon = std::move(recon);
  rep.residual_sq = out.trace.energies.back();
  return out;
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::greedy: return "greedy";
    case Method::omp: return "omp";
    case Method::exhaustive: return "exhaustive";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "greedy") return Method::greedy;
  if (text == "omp") return Method::omp;
  if (text == "exhaustive") return Method::exhaustive;
  throw Error(Errc::invalid_config, "unknown method '" + std::string(text) + "'");
}

double distortion(const Signal& y, const Dictionary& dict, std::size_t k, Method method, std::uint64_t budget) {
  check_inputs(y, dict);
  if (k == 0) return norm_sq(y);
  switch (method) {
    case Method::greedy: return successive_represent(y, dict, k).rep.residual_sq;
    case Method::omp: return omp_represent(y, dict, k).rep.residual_sq;
    case Method::exhaustive: return exhaustive_best_k(y, dict, k, budget).residual_sq;
  }
  throw Error(Errc::invalid_params, "unknown method");
}

std::size_t LinearSystemView::nonzeros() const noexcept {
  std::size_t count = 0;
  for (Index i = 0; i < x.size(); ++i) count += x[i] != 0.0 ? 1 : 0;
  return count;
}

LinearSystemView export_linear_system(const Signal& y, const Dictionary& dict, const SparseRep& rep) {
  check_inputs(y, dict);
  if (rep.indices.size() != rep.coeffs.size()) throw Error(Errc::invalid_params, "indices and coeffs differ in length");
  LinearSystemView view;
  view.phi = dict.atoms();
  view.x = Vector::Zero(dict.size());
  for (std::size_t i = 0; i < rep.indices.size(); ++i) {
    const Index m = rep.indices[i];
    if (m < 0 || m >= dict.size()) {
      throw Error(Errc::index_out_of_range, "atom index " + std::to_string(m) + " out of range", i);
    }
    view.x[m] += rep.coeffs[i];
  }
  view.z = y.values() - view.phi * view.x;
  return view;
}

}  // namespace srlab
