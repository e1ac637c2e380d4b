#include "fpsi/system.hpp"

#include <Eigen/SparseCholesky>
#include <cstdio>
#include <ostream>

namespace fpsi {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& t, const SparseMatrix& m, int r0, int c0, double scale = 1.0) {
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      t.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
    }
  }
}

void add_transposed_block(Triplets& t, const SparseMatrix& m, int r0, int c0, double scale = 1.0) {
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      t.emplace_back(r0 + it.col(), c0 + it.row(), scale * it.value());
    }
  }
}

SparseMatrix build(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Zero the rows/columns flagged in `row_fixed`/`col_fixed`; unit diagonal when `unit`.
SparseMatrix eliminate(const SparseMatrix& m, const std::vector<char>& row_fixed, int row_off,
                       const std::vector<char>& col_fixed, int col_off, bool unit) {
  Triplets t;
  for (int r = 0; r < m.outerSize(); ++r) {
    if (row_fixed[row_off + r]) continue;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (col_fixed[col_off + it.col()]) continue;
      t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  if (unit) {
    for (int r = 0; r < m.rows(); ++r) {
      if (row_fixed[row_off + r]) t.emplace_back(r, r, 1.0);
    }
  }
  return build(static_cast<int>(m.rows()), static_cast<int>(m.cols()), t);
}

void check_spd(const SparseMatrix& block, const std::vector<char>& fixed, int off, const char* name) {
  std::vector<int> keep;
  for (int i = 0; i < block.rows(); ++i) {
    if (!fixed[off + i]) keep.push_back(i);
  }
  std::vector<int> map(static_cast<std::size_t>(block.rows()), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) map[keep[k]] = static_cast<int>(k);
  Triplets t;
  for (int r = 0; r < block.outerSize(); ++r) {
    if (map[r] < 0) continue;
    for (SparseMatrix::InnerIterator it(block, r); it; ++it) {
      if (map[it.col()] >= 0) t.emplace_back(map[r], map[it.col()], it.value());
    }
  }
  Eigen::SparseMatrix<double> sub(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  sub.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sub);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularBlock, std::string(name) + " Gram block is not positive definite");
  }
}

SparseMatrix full_gradient(const FunctionSpace& sp) {
  // (∇u, ∇v) for a vector space: the scalar stiffness on each component.
  FunctionSpace scalar = sp;
  scalar.components = 1;
  scalar.dirichlet.assign(static_cast<std::size_t>(scalar.dofs()), 0);
  const SparseMatrix k = stiffness_matrix(scalar);
  Triplets t;
  for (int c = 0; c < sp.components; ++c) add_block(t, k, c * sp.n_nodes, c * sp.n_nodes);
  return build(sp.dofs(), sp.dofs(), t);
}

}  // namespace

std::vector<int> BlockSystem::free_M() const {
  std::vector<int> out;
  for (int i = 0; i < dim_M(); ++i) {
    if (!fixed[i]) out.push_back(i);
  }
  return out;
}

std::vector<int> BlockSystem::free_Z() const {
  std::vector<int> out;
  for (int i = dim_M(); i < dim(); ++i) {
    if (!fixed[i]) out.push_back(i - dim_M());
  }
  return out;
}

BlockSystem build_block_system(std::shared_ptr<const DiscreteSpaces> spaces, const PhysicalParams& p, double dt,
                               bool allow_zero_eps_bar) {
  p.validate(allow_zero_eps_bar);
  if (!(dt > 0.0)) throw Error(ErrorKind::NonPositiveParam, "dt must be positive");
  const auto& s = *spaces;
  if (s.g1.cells() != static_cast<int>(s.geometry.interface->segments.size()) || s.g2.cells() != s.g1.cells() ||
      s.lambda.cells() != s.g1.cells()) {
    throw Error(ErrorKind::SpaceMismatch, "interface spaces do not match the interface mesh");
  }
  BlockSystem sys;
  sys.spaces = spaces;
  sys.params = p;
  sys.dt = dt;
  const std::array<const FunctionSpace*, kFieldCount> fields = {&s.velocity, &s.displacement, &s.pore_pressure,
                                                                 &s.g2,       &s.lambda,       &s.fluid_pressure,
                                                                 &s.g1};
  sys.offsets[0] = 0;
  for (int f = 0; f < kFieldCount; ++f) sys.offsets[f + 1] = sys.offsets[f] + fields[f]->dofs();
  sys.fixed.assign(static_cast<std::size_t>(sys.dim()), 0);
  for (int f = 0; f < kFieldCount; ++f) {
    for (int i = 0; i < fields[f]->dofs(); ++i) sys.fixed[sys.offsets[f] + i] = fields[f]->dirichlet[i];
  }

  const int oU = sys.offset(Field::Velocity), oX = sys.offset(Field::Displacement);
  const int oP = sys.offset(Field::PorePressure), oG2 = sys.offset(Field::G2), oL = sys.offset(Field::Lambda);
  const int nM = sys.dim_M(), nZ = sys.dim_Z();
  const int zQ = 0, zG1 = sys.offset(Field::G1) - nM;

  const SparseMatrix A1 = assemble_volume_form(VolumeForm::A1, s, p, dt);
  const SparseMatrix A2 = assemble_volume_form(VolumeForm::A2, s, p, dt);
  const SparseMatrix BPP = assemble_volume_form(VolumeForm::BPP, s, p, dt);
  const SparseMatrix BPF = assemble_volume_form(VolumeForm::BPF, s, p, dt);
  const SparseMatrix AG = assemble_interface_form(InterfaceForm::AG, s, p, dt);
  const SparseMatrix BG1 = assemble_interface_form(InterfaceForm::BG1, s, p, dt);
  const SparseMatrix BG2 = assemble_interface_form(InterfaceForm::BG2, s, p, dt);
  const SparseMatrix BLM = assemble_interface_form(InterfaceForm::BLM, s, p, dt);
  const SparseMatrix B2 = assemble_interface_form(InterfaceForm::B2, s, p, dt);
  sys.S_lambda = assemble_h_half_gram(s.lambda);

  Triplets a;
  add_block(a, A1, oU, oU);
  add_transposed_block(a, BPP, oX, oP);
  add_block(a, BPP, oP, oX, -1.0);
  add_block(a, A2, oP, oP);
  add_transposed_block(a, B2, oP, oL, -1.0);
  add_transposed_block(a, BG2, oU, oG2);
  add_block(a, BG2, oG2, oU, -1.0);
  add_block(a, AG, oG2, oG2);
  add_block(a, B2, oL, oP);
  add_block(a, sys.S_lambda, oL, oL, p.eps_bar);
  sys.A_M = eliminate(build(nM, nM, a), sys.fixed, 0, sys.fixed, 0, true);

  Triplets b;
  add_block(b, BPF, zQ, oU);
  add_block(b, BG1, zG1, oU);
  add_block(b, BLM, zG1, oL);
  sys.B_MZ = eliminate(build(nZ, nM, b), sys.fixed, nM, sys.fixed, 0, false);

  const SparseMatrix MU = mass_matrix(s.velocity), MX = mass_matrix(s.displacement);
  const SparseMatrix MP = mass_matrix(s.pore_pressure);
  const SparseMatrix gU = MU + strain_matrix(s.velocity);
  const SparseMatrix gX = MX + strain_matrix(s.displacement);
  const SparseMatrix gP = MP + stiffness_matrix(s.pore_pressure);
  const SparseMatrix gG2 = mass_matrix(s.g2);
  Triplets g;
  add_block(g, gU, oU, oU);
  add_block(g, gX, oX, oX);
  add_block(g, gP, oP, oP);
  add_block(g, gG2, oG2, oG2);
  add_block(g, sys.S_lambda, oL, oL);
  sys.G_M = eliminate(build(nM, nM, g), sys.fixed, 0, sys.fixed, 0, true);

  Triplets gf;
  add_block(gf, MU + full_gradient(s.velocity), oU, oU);
  add_block(gf, MX + full_gradient(s.displacement), oX, oX);
  add_block(gf, gP, oP, oP);
  add_block(gf, gG2, oG2, oG2);
  add_block(gf, sys.S_lambda, oL, oL);
  sys.G_M_full_gradient = eliminate(build(nM, nM, gf), sys.fixed, 0, sys.fixed, 0, true);

  // Discrete H^{-1/2} norm on the normal-stress multiplier: R S⁻¹ Rᵀ.
  const Eigen::MatrixXd S = Eigen::MatrixXd(sys.S_lambda);
  const Eigen::MatrixXd R = Eigen::MatrixXd(BLM);
  Eigen::LLT<Eigen::MatrixXd> sllt(S);
  if (sllt.info() != Eigen::Success) throw Error(ErrorKind::SingularBlock, "H^1/2 Gram is not positive definite");
  const Eigen::MatrixXd dual = R * sllt.solve(R.transpose());
  Triplets z;
  add_block(z, mass_matrix(s.fluid_pressure), zQ, zQ);
  for (int i = 0; i < dual.rows(); ++i) {
    for (int j = 0; j < dual.cols(); ++j) {
      if (dual(i, j) != 0.0) z.emplace_back(zG1 + i, zG1 + j, 0.5 * (dual(i, j) + dual(j, i)));
    }
  }
  sys.G_Z = build(nZ, nZ, z);

  check_spd(gU, sys.fixed, oU, "velocity");
  check_spd(gX, sys.fixed, oX, "displacement");
  check_spd(gP, sys.fixed, oP, "pore pressure");
  check_spd(gG2, sys.fixed, oG2, "tangential multiplier");
  check_spd(sys.S_lambda, sys.fixed, oL, "flux multiplier");
  check_spd(sys.G_Z, sys.fixed, nM, "Z");
  return sys;
}

SparseMatrix full_matrix(const BlockSystem& sys) {
  const int nM = sys.dim_M();
  Triplets t;
  add_block(t, sys.A_M, 0, 0);
  add_transposed_block(t, sys.B_MZ, 0, nM);
  add_block(t, sys.B_MZ, nM, 0);
  return build(sys.dim(), sys.dim(), t);
}

Eigen::VectorXd assemble_rhs(const BlockSystem& sys, const LoadData& data, const LoadHistory& history) {
  const auto& s = *sys.spaces;
  const auto& p = sys.params;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.dim());
  const Eigen::VectorXd f1 = assemble_load(LoadId::F1, s, data, history, p, sys.dt);
  rhs.segment(sys.offset(Field::Velocity), f1.size()) = f1;
  rhs.segment(sys.offset(Field::PorePressure), sys.size(Field::PorePressure)) =
      assemble_load(LoadId::F2, s, data, history, p, sys.dt);
  rhs.segment(sys.offset(Field::G2), sys.size(Field::G2)) = assemble_load(LoadId::F4, s, data, history, p, sys.dt);
  rhs.segment(sys.offset(Field::Lambda), sys.size(Field::Lambda)) = assemble_lambda_load(s, data, sys.dt);
  rhs.segment(sys.offset(Field::G1), sys.size(Field::G1)) = -assemble_load(LoadId::F3, s, data, history, p, sys.dt);
  for (int i = 0; i < sys.dim(); ++i) {
    if (sys.fixed[i]) rhs[i] = 0.0;
  }
  return rhs;
}

std::array<double, 7> residual(const BlockSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  if (x.size() != sys.dim() || rhs.size() != sys.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state or right-hand side has the wrong size");
  }
  const int nM = sys.dim_M();
  Eigen::VectorXd r(sys.dim());
  r.head(nM) = sys.A_M * x.head(nM) + sys.B_MZ.transpose() * x.tail(sys.dim_Z()) - rhs.head(nM);
  r.tail(sys.dim_Z()) = sys.B_MZ * x.head(nM) - rhs.tail(sys.dim_Z());
  const std::array<Field, 7> order = {Field::Velocity, Field::FluidPressure, Field::Displacement, Field::PorePressure,
                                      Field::G2,       Field::Lambda,        Field::G1};
  std::array<double, 7> out{};
  for (int k = 0; k < 7; ++k) out[k] = r.segment(sys.offset(order[k]), sys.size(order[k])).norm();
  return out;
}

Eigen::MatrixXd submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> cmap(static_cast<std::size_t>(m.cols()), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) cmap[cols[j]] = static_cast<int>(j);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMatrix::InnerIterator it(m, rows[i]); it; ++it) {
      const int j = cmap[it.col()];
      if (j >= 0) out(static_cast<Eigen::Index>(i), j) = it.value();
    }
  }
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[64];
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
  }
}

}  // namespace fpsi
