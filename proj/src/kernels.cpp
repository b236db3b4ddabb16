#include "decaylab/kernels.hpp"

namespace decaylab {

SeparableKernel::SeparableKernel(GridPtr grid, std::vector<KernelTerm> terms)
    : grid_(std::move(grid)), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    require(static_cast<std::size_t>(t.a.size()) == grid_->size() &&
                static_cast<std::size_t>(t.b.size()) == grid_->size(),
            ErrorCode::invalid_argument, "SeparableKernel: term length does not match grid");
}

Eigen::VectorXcd SeparableKernel::apply(const Eigen::VectorXcd& u) const {
  require(static_cast<std::size_t>(u.size()) == grid_->size(), ErrorCode::invalid_argument,
          "SeparableKernel::apply: field length does not match grid");
  const Eigen::VectorXd r2 = grid_->nodes().cwiseProduct(grid_->nodes());
  const Eigen::VectorXcd ur2 = u.cwiseProduct(r2.cast<cplx>());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(u.size());
  for (const auto& t : terms_) {
    const Eigen::VectorXcd cum_a = grid_->cumulative(t.a.cwiseProduct(ur2));
    const Eigen::VectorXcd cum_b = grid_->cumulative(t.b.cwiseProduct(ur2));
    const cplx tot_b = cum_b[cum_b.size() - 1];
    out += t.b.cwiseProduct(cum_a) + t.a.cwiseProduct((Eigen::VectorXcd::Constant(u.size(), tot_b) - cum_b));
  }
  return out;
}

Eigen::MatrixXcd SeparableKernel::operator_matrix() const {
  const auto n = static_cast<Eigen::Index>(grid_->size());
  const auto& g = *grid_;
  // dense cumulative-weight matrix, row i = prefix of full panels + local row
  Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(n, n);
  const std::size_t p = g.order();
  Eigen::RowVectorXd prefix = Eigen::RowVectorXd::Zero(n);
  for (std::size_t k = 0; k < g.panels(); ++k) {
    const std::size_t first = g.panel_first(k);
    const double half = 0.5 * (g.panel_hi(k) - g.panel_lo(k));
    for (std::size_t a = 1; a < p; ++a) {
      const auto i = static_cast<Eigen::Index>(first + a);
      cum.row(i) = prefix;
      for (std::size_t b = 0; b < p; ++b)
        cum(i, static_cast<Eigen::Index>(first + b)) += half * g.reference_cumulative()[a * p + b];
    }
    prefix = cum.row(static_cast<Eigen::Index>(first + p - 1));
  }
  const Eigen::VectorXd r2 = g.nodes().cwiseProduct(g.nodes());
  const Eigen::MatrixXd full = Eigen::VectorXd::Ones(n) * g.dr_weights().transpose();
  const Eigen::MatrixXd rest = full - cum;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& t : terms_) {
    const Eigen::VectorXcd ar2 = t.a.cwiseProduct(r2.cast<cplx>());
    const Eigen::VectorXcd br2 = t.b.cwiseProduct(r2.cast<cplx>());
    op += t.b.asDiagonal() * cum.cast<cplx>() * ar2.asDiagonal();
    op += t.a.asDiagonal() * rest.cast<cplx>() * br2.asDiagonal();
  }
  return op;
}

Eigen::MatrixXd cumulative_block(const RadialGrid& grid, const std::vector<std::size_t>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd c(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) c(a, b) = grid.cumulative_weight(idx[a], idx[b]);
  return c;
}

Eigen::MatrixXcd SeparableKernel::operator_block(const std::vector<std::size_t>& idx,
                                                 const Eigen::MatrixXd& cum_block) const {
  const auto m = static_cast<Eigen::Index>(idx.size());
  const auto& g = *grid_;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& t : terms_) {
    for (Eigen::Index jj = 0; jj < m; ++jj) {
      const auto j = static_cast<Eigen::Index>(idx[jj]);
      const double r2w = g.nodes()[j] * g.nodes()[j];
      const double wj = g.dr_weights()[j];
      const cplx aj = t.a[j] * r2w, bj = t.b[j] * r2w;
      for (Eigen::Index ii = 0; ii < m; ++ii) {
        const auto i = static_cast<Eigen::Index>(idx[ii]);
        const double c = cum_block(ii, jj);
        op(ii, jj) += t.b[i] * c * aj + t.a[i] * (wj - c) * bj;
      }
    }
  }
  return op;
}

Eigen::MatrixXd cumulative_columns(const RadialGrid& grid, const std::vector<std::size_t>& idx) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd c(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      c(i, static_cast<Eigen::Index>(k)) = grid.cumulative_weight(static_cast<std::size_t>(i), idx[k]);
  return c;
}

Eigen::MatrixXcd SeparableKernel::operator_columns(const std::vector<std::size_t>& idx) const {
  return operator_columns(idx, cumulative_columns(*grid_, idx));
}

Eigen::MatrixXcd SeparableKernel::operator_columns(const std::vector<std::size_t>& idx,
                                                   const Eigen::MatrixXd& cum_cols) const {
  const auto& g = *grid_;
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t jj = 0; jj < idx.size(); ++jj) {
    const auto j = static_cast<Eigen::Index>(idx[jj]);
    const auto col = static_cast<Eigen::Index>(jj);
    const double r2 = g.nodes()[j] * g.nodes()[j];
    const double wj = g.dr_weights()[j];
    for (const auto& t : terms_) {
      const cplx aj = t.a[j] * r2, bj = t.b[j] * r2;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double c = cum_cols(i, col);
        op(i, col) += t.b[i] * (c * aj) + t.a[i] * ((wj - c) * bj);
      }
    }
  }
  return op;
}

cplx SeparableKernel::kernel(std::size_t i, std::size_t j) const {
  const auto lo = static_cast<Eigen::Index>(std::min(i, j)), hi = static_cast<Eigen::Index>(std::max(i, j));
  cplx s = 0.0;
  for (const auto& t : terms_) s += t.a[lo] * t.b[hi];
  return s;
}

Eigen::MatrixXcd SeparableKernel::kernel_matrix() const {
  const auto n = static_cast<Eigen::Index>(grid_->size());
  Eigen::MatrixXcd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      cplx s = 0.0;
      for (const auto& t : terms_) s += t.a[i] * t.b[j];
      k(i, j) = s;
      k(j, i) = s;
    }
  return k;
}

SeparableKernel SeparableKernel::conjugate() const {
  std::vector<KernelTerm> t;
  for (const auto& x : terms_) t.push_back({x.a.conjugate(), x.b.conjugate()});
  return {grid_, std::move(t)};
}

SeparableKernel SeparableKernel::scaled(cplx alpha) const {
  std::vector<KernelTerm> t;
  for (const auto& x : terms_) t.push_back({alpha * x.a, x.b});
  return {grid_, std::move(t)};
}

SeparableKernel SeparableKernel::operator-(const SeparableKernel& other) const {
  std::vector<KernelTerm> t = terms_;
  for (const auto& x : other.terms_) t.push_back({-x.a, x.b});
  return {grid_, std::move(t)};
}

}  // namespace decaylab
