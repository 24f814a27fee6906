#include "sparqs/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "sparqs/errors.hpp"
#include "sparqs/kernels.hpp"

namespace sparqs {

BlockStructure::BlockStructure(std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  std::size_t dim = 0;
  for (const auto& b : blocks_) dim += b.size();
  block_of_.assign(dim, 0);
  position_.assign(dim, 0);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (std::size_t p = 0; p < blocks_[b].size(); ++p) {
      block_of_[blocks_[b][p]] = b;
      position_[blocks_[b][p]] = p;
    }
}

BlockStructure BlockStructure::of(const ControlledHamiltonian& ham) {
  const std::size_t n = ham.dim();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Controls are diagonal, so only the drift couples basis states.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ham.drift(i, j) != cplx(0.0) || ham.drift(j, i) != cplx(0.0)) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = blocks.size();
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return BlockStructure(std::move(blocks));
}

BlockStructure BlockStructure::single(std::size_t dim) {
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return BlockStructure({std::move(all)});
}

std::vector<std::size_t> BlockStructure::touching(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> out;
  for (std::size_t i : indices) out.push_back(block_of_.at(i));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CMatrix BlockHamiltonian::at(std::span<const double> coeffs) const {
  CMatrix h = drift;
  for (std::size_t c = 0; c < control_diagonals.size(); ++c)
    for (std::size_t i = 0; i < dim(); ++i) h(i, i) += coeffs[c] * control_diagonals[c][i];
  return h;
}

std::vector<BlockHamiltonian> split_hamiltonian(const ControlledHamiltonian& ham,
                                                const BlockStructure& blocks) {
  std::vector<BlockHamiltonian> parts;
  for (std::size_t b = 0; b < blocks.count(); ++b) {
    BlockHamiltonian part;
    part.indices = blocks.block(b);
    const std::size_t n = part.dim();
    part.drift = CMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) part.drift(i, j) = ham.drift(part.indices[i], part.indices[j]);
    for (const auto& diag : ham.control_diagonals) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = diag[part.indices[i]];
      part.control_diagonals.push_back(std::move(d));
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

StepFactor make_step(const CMatrix& h, double dt) {
  StepFactor f{eigh(h), CMatrix()};
  const std::size_t n = h.rows();
  const CMatrix& v = f.eig.vectors;
  CMatrix scaled(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phase = -f.eig.values[k] * dt;
    const cplx e(std::cos(phase), std::sin(phase));
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) = v(i, k) * e;
  }
  f.unitary = scaled * v.adjoint();
  return f;
}

CMatrix step_propagator(const CMatrix& h, double dt) {
  if (!h.square()) throw invalid_operator("step propagator: generator is not square");
  const double defect = hermiticity_defect(h);
  if (defect > 1e-10)
    throw invalid_operator("step propagator: generator is not Hermitian (defect " +
                           std::to_string(defect) + ")");
  return make_step(h, dt).unitary;
}

CMatrix Propagation::total_unitary(std::size_t full_dim) const {
  CMatrix u(full_dim);
  for (std::size_t s = 0; s < parts.size(); ++s) {
    const auto& idx = parts[s].indices;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) u(idx[i], idx[j]) = totals[s](i, j);
  }
  return u;
}

namespace {

void check_fine(const ControlledHamiltonian& ham, const FinePulse& fine, const ScheduleSpec& spec) {
  spec.validate();
  if (fine.controls() != ham.controls.size())
    throw grid_mismatch("propagation: pulse has " + std::to_string(fine.controls()) +
                        " controls, hamiltonian " + std::to_string(ham.controls.size()));
  for (const auto& v : fine.values)
    if (v.size() != spec.fine_steps())
      throw grid_mismatch("propagation: fine pulse has " + std::to_string(v.size()) +
                          " samples, schedule needs " + std::to_string(spec.fine_steps()));
}

}  // namespace

Propagation total_propagator(const ControlledHamiltonian& ham, const FinePulse& fine,
                             const ScheduleSpec& spec, const BlockStructure& blocks,
                             const PropagateOptions& opts) {
  check_fine(ham, fine, spec);
  Propagation prop;
  prop.dt = spec.fine_dt;
  prop.steps = spec.fine_steps();
  if (opts.blocks.empty()) {
    prop.blocks.resize(blocks.count());
    std::iota(prop.blocks.begin(), prop.blocks.end(), std::size_t{0});
  } else {
    prop.blocks = opts.blocks;
  }
  auto all_parts = split_hamiltonian(ham, blocks);
  for (std::size_t b : prop.blocks) prop.parts.push_back(all_parts.at(b));

  std::vector<double> coeffs(fine.controls());
  prop.totals.reserve(prop.parts.size());
  if (opts.keep_steps) prop.factors.resize(prop.parts.size());
  for (std::size_t s = 0; s < prop.parts.size(); ++s) {
    const auto& part = prop.parts[s];
    CMatrix total = CMatrix::identity(part.dim());
    CMatrix next(part.dim());
    for (std::size_t m = 0; m < prop.steps; ++m) {
      for (std::size_t c = 0; c < coeffs.size(); ++c) coeffs[c] = fine.values[c][m];
      StepFactor f = make_step(part.at(coeffs), prop.dt);
      kernels::active().zgemm(part.dim(), part.dim(), part.dim(), f.unitary.data(), total.data(),
                              next.data());
      std::swap(total, next);
      if (opts.keep_steps) prop.factors[s].push_back(std::move(f));
    }
    prop.totals.push_back(std::move(total));
  }
  return prop;
}

Propagation total_propagator(const ControlledHamiltonian& ham, const FinePulse& fine,
                             const ScheduleSpec& spec) {
  return total_propagator(ham, fine, spec, BlockStructure::of(ham));
}

std::size_t Trajectory::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw invalid_label("trajectory has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::string population_column(const std::string& watch_entry) {
  if (watch_entry == "leak" || watch_entry == "other") return "p_" + watch_entry;
  std::string out = "p_";
  for (char ch : watch_entry) out += (ch == '|') ? '_' : ch;
  return out;
}

Trajectory trajectory(const ControlledHamiltonian& ham, const FinePulse& fine,
                      const ScheduleSpec& spec, std::span<const cplx> initial,
                      const std::vector<std::string>& watch) {
  check_fine(ham, fine, spec);
  const SubsystemDims& dims = ham.dims;
  const std::size_t n = dims.total();
  if (initial.size() != n) throw invalid_dimension("trajectory: initial state has wrong dimension");

  // Column membership. Leakage: any qubit at level ≥ 2. "other": every state
  // not claimed by an explicit label or by the leakage group.
  const auto occ = occupations(dims);
  std::vector<bool> leak(n, false), labelled(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 1; s < dims.count(); ++s)
      if (occ[i * dims.count() + s] >= 2) leak[i] = true;
  std::vector<std::vector<std::size_t>> members;
  Trajectory traj;
  bool want_leak = false;
  for (const auto& w : watch) {
    traj.columns.push_back(population_column(w));
    if (w == "leak") {
      want_leak = true;
      members.emplace_back();
      for (std::size_t i = 0; i < n; ++i)
        if (leak[i]) members.back().push_back(i);
    } else if (w == "other") {
      members.emplace_back();
    } else {
      const std::size_t idx = basis_index(BasisLabel::parse(w), dims);
      labelled[idx] = true;
      members.push_back({idx});
    }
  }
  for (std::size_t k = 0; k < watch.size(); ++k)
    if (watch[k] == "other")
      for (std::size_t i = 0; i < n; ++i)
        if (!labelled[i] && !(want_leak && leak[i])) members[k].push_back(i);

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (initial[i] != cplx(0.0)) support.push_back(i);
  const BlockStructure blocks = BlockStructure::of(ham);
  const auto live = blocks.touching(support);
  const auto parts = split_hamiltonian(ham, blocks);

  std::vector<cplx> psi(initial.begin(), initial.end());
  auto record = [&](double t) {
    traj.t.push_back(t);
    std::vector<double> pops;
    for (const auto& mem : members) {
      double p = 0.0;
      for (std::size_t i : mem) p += std::norm(psi[i]);
      pops.push_back(p);
    }
    traj.populations.push_back(std::move(pops));
    double norm2 = 0.0;
    for (const cplx& x : psi) norm2 += std::norm(x);
    traj.norm.push_back(std::sqrt(norm2));
    traj.states.push_back(psi);
  };

  record(0.0);
  std::vector<double> coeffs(fine.controls());
  std::vector<cplx> local, next;
  for (std::size_t m = 0; m < spec.fine_steps(); ++m) {
    for (std::size_t c = 0; c < coeffs.size(); ++c) coeffs[c] = fine.values[c][m];
    for (std::size_t b : live) {
      const auto& part = parts[b];
      const CMatrix u = make_step(part.at(coeffs), spec.fine_dt).unitary;
      local.resize(part.dim());
      next.resize(part.dim());
      for (std::size_t i = 0; i < part.dim(); ++i) local[i] = psi[part.indices[i]];
      kernels::active().zgemm(part.dim(), 1, part.dim(), u.data(), local.data(), next.data());
      for (std::size_t i = 0; i < part.dim(); ++i) psi[part.indices[i]] = next[i];
    }
    record(static_cast<double>(m + 1) * spec.fine_dt);
  }
  return traj;
}

Trajectory trajectory(const ControlledHamiltonian& ham, const FinePulse& fine,
                      const ScheduleSpec& spec, const BasisLabel& initial,
                      const std::vector<std::string>& watch) {
  std::vector<cplx> psi(ham.dims.total(), 0.0);
  psi[basis_index(initial, ham.dims)] = 1.0;
  return trajectory(ham, fine, spec, psi, watch);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t_ns";
  for (const auto& c : traj.columns) os << ',' << c;
  os << '\n';
  char buf[40];
  for (std::size_t r = 0; r < traj.t.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.t[r]);
    os << buf;
    for (double p : traj.populations[r]) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace sparqs
