#include "sparqs/objective.hpp"

#include <algorithm>
#include <cmath>

#include "sparqs/errors.hpp"
#include "sparqs/kernels.hpp"

namespace sparqs {
namespace {

// (e^{−iλ_j dt} − e^{−iλ_k dt}) / (λ_j − λ_k), written through the midpoint
// phase and a sinc so that it stays accurate as λ_j → λ_k.
cplx divided_difference(double lj, double lk, double dt) {
  const double half = 0.5 * (lj - lk) * dt;
  const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  const double mid = -0.5 * (lj + lk) * dt;
  return cplx(0.0, -dt) * cplx(std::cos(mid), std::sin(mid)) * sinc;
}

void gemm(const CMatrix& a, const CMatrix& b, CMatrix& c) {
  if (c.rows() != a.rows() || c.cols() != b.cols()) c = CMatrix(a.rows(), b.cols());
  kernels::active().zgemm(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
}

}  // namespace

FidelityResult projected_fidelity(const CMatrix& u, const TargetGate& target) {
  const std::size_t d = target.subspace.size();
  if (d == 0 || target.unitary.rows() != d || target.unitary.cols() != d)
    throw invalid_dimension("fidelity: target and subspace dimensions differ");
  if (!u.square()) throw invalid_dimension("fidelity: propagator is not square");
  for (std::size_t i : target.subspace.indices)
    if (i >= u.rows()) throw invalid_dimension("fidelity: subspace index outside the propagator");
  cplx tr = 0.0;
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t k = 0; k < d; ++k)
      tr += std::conj(target.unitary(l, k)) *
            u(target.subspace.indices[l], target.subspace.indices[k]);
  FidelityResult r;
  r.overlap = tr / static_cast<double>(d);
  r.fidelity = std::norm(r.overlap);
  return r;
}

FidelityEvaluator::FidelityEvaluator(ControlProblem problem)
    : problem_(std::move(problem)), filter_(problem_.schedule) {
  problem_.validate();
  const auto& sub = problem_.target.subspace;
  const auto& target = problem_.target.unitary;
  subspace_dim_ = static_cast<double>(sub.size());

  const BlockStructure blocks = BlockStructure::of(problem_.hamiltonian);
  auto parts = split_hamiltonian(problem_.hamiltonian, blocks);
  for (std::size_t b : blocks.touching(sub.indices)) {
    Sector s;
    s.part = parts[b];
    std::vector<std::size_t> cols;  // subspace columns living in this block
    for (std::size_t k = 0; k < sub.size(); ++k)
      if (blocks.block_of(sub.indices[k]) == b) {
        cols.push_back(k);
        s.positions.push_back(blocks.position(sub.indices[k]));
      }
    s.target_adjoint = CMatrix(cols.size(), s.part.dim());
    for (std::size_t k = 0; k < cols.size(); ++k)
      for (std::size_t l = 0; l < cols.size(); ++l)
        s.target_adjoint(k, s.positions[l]) = std::conj(target(cols[l], cols[k]));
    sectors_.push_back(std::move(s));
  }
}

FidelityResult FidelityEvaluator::evaluate(std::span<const double> flat, bool with_gradient) const {
  if (flat.size() != problem_.variables())
    throw grid_mismatch("fidelity: expected " + std::to_string(problem_.variables()) +
                        " control samples, got " + std::to_string(flat.size()));
  return evaluate(CoarsePulse::unflatten(flat, problem_.idle), with_gradient);
}

FidelityResult FidelityEvaluator::evaluate(const CoarsePulse& pulse, bool with_gradient) const {
  if (pulse.controls() != problem_.controls())
    throw grid_mismatch("fidelity: pulse has the wrong number of controls");
  for (const auto& v : pulse.values)
    if (v.size() != filter_.cols()) throw grid_mismatch("fidelity: pulse has the wrong number of samples");
  FidelityResult r = evaluate_fine(filter_.apply(pulse), with_gradient);
  if (!with_gradient) return r;

  const std::size_t rows = filter_.rows();
  std::vector<double> coarse;
  coarse.reserve(problem_.variables());
  for (std::size_t c = 0; c < problem_.controls(); ++c) {
    std::span<const double> fine(r.gradient.data() + c * rows, rows);
    std::vector<double> shifted;
    if (problem_.corrupt_filter_adjoint) {
      shifted.assign(fine.begin(), fine.end());
      std::rotate(shifted.begin(), shifted.begin() + 1, shifted.end());
      fine = shifted;
    }
    const auto g = filter_.apply_transpose(fine);
    coarse.insert(coarse.end(), g.begin(), g.end());
  }
  r.gradient = std::move(coarse);
  return r;
}

FidelityResult FidelityEvaluator::evaluate_fine(const FinePulse& fine, bool with_gradient) const {
  const ScheduleSpec& spec = problem_.schedule;
  const std::size_t steps = spec.fine_steps();
  const std::size_t ncontrol = problem_.controls();
  if (fine.controls() != ncontrol) throw grid_mismatch("fidelity: fine pulse has the wrong control count");
  for (const auto& v : fine.values) {
    if (v.size() != steps) throw grid_mismatch("fidelity: fine pulse has the wrong length");
    for (double x : v)
      if (!std::isfinite(x)) throw nonfinite_objective("fidelity: non-finite control value");
  }
  const double dt = spec.fine_dt;
  const auto& k = kernels::active();

  FidelityResult result;
  cplx overlap = 0.0;
  std::vector<cplx> dz;
  if (with_gradient) dz.assign(ncontrol * steps, 0.0);

  std::vector<double> coeffs(ncontrol);
  for (const Sector& s : sectors_) {
    const std::size_t n = s.part.dim();
    const std::size_t d = s.positions.size();
    CMatrix x(n, d);
    for (std::size_t c = 0; c < d; ++c) x(s.positions[c], c) = 1.0;

    std::vector<StepFactor> factors;
    std::vector<CMatrix> forward;  // X_m before step m
    if (with_gradient) {
      factors.reserve(steps);
      forward.reserve(steps);
    }
    CMatrix next(n, d);
    for (std::size_t m = 0; m < steps; ++m) {
      for (std::size_t c = 0; c < ncontrol; ++c) coeffs[c] = fine.values[c][m];
      StepFactor f = make_step(s.part.at(coeffs), dt);
      k.zgemm(n, d, n, f.unitary.data(), x.data(), next.data());
      if (with_gradient) {
        forward.push_back(x);
        factors.push_back(std::move(f));
      }
      std::swap(x, next);
    }
    CMatrix yx(d, d);
    gemm(s.target_adjoint, x, yx);
    overlap += yx.trace();

    if (!with_gradient) continue;

    // Backward sweep: y holds Y·U_{N-1}···U_{m+1} at step m.
    CMatrix y = s.target_adjoint;
    CMatrix a(n, d), b(d, n), g(n, n), kmat(n, n), r(n, n), vt(n, n), ynext(d, n);
    std::vector<cplx> diag(n);
    for (std::size_t m = steps; m-- > 0;) {
      const StepFactor& f = factors[m];
      const CMatrix& v = f.eig.vectors;
      const auto& lam = f.eig.values;
      const CMatrix vh = v.adjoint();
      gemm(vh, forward[m], a);  // V† X_m
      gemm(y, v, b);            // Y_m V
      gemm(a, b, g);            // G' = V† X_m Y_m V
      // K = Γ ∘ G'ᵀ, R = conj(V)·K, diag_l = Σ_k R_lk V_lk
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kmat(i, j) = divided_difference(lam[i], lam[j], dt) * g(j, i);
      CMatrix vconj(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          vconj(i, j) = std::conj(v(i, j));
          vt(j, i) = v(i, j);
        }
      gemm(vconj, kmat, r);
      k.zdiag_product(n, r.data(), vt.data(), diag.data());
      for (std::size_t c = 0; c < ncontrol; ++c) {
        const auto& cd = s.part.control_diagonals[c];
        cplx acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc += cd[l] * diag[l];
        dz[c * steps + m] += acc;
      }
      gemm(y, f.unitary, ynext);
      std::swap(y, ynext);
    }
  }

  result.overlap = overlap / subspace_dim_;
  result.fidelity = std::norm(result.overlap);
  if (!std::isfinite(result.fidelity))
    throw nonfinite_objective("fidelity evaluated to a non-finite value");
  if (with_gradient) {
    result.gradient.resize(dz.size());
    const cplx zbar = std::conj(result.overlap);
    for (std::size_t i = 0; i < dz.size(); ++i)
      result.gradient[i] = 2.0 * (zbar * dz[i]).real() / subspace_dim_;
  }
  return result;
}

FidelityResult fidelity_and_gradient(const ControlProblem& problem, const CoarsePulse& pulse) {
  return FidelityEvaluator(problem).evaluate(pulse, true);
}

}  // namespace sparqs
