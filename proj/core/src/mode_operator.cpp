#include "nclab/mode_operator.hpp"

#include <algorithm>
#include <cmath>

namespace nclab {

namespace {

ModeOffset add(const ModeOffset& a, const ModeOffset& b) {
  return ModeOffset{a[0] + b[0], a[1] + b[1]};
}

ModeOffset negate(const ModeOffset& a) { return ModeOffset{-a[0], -a[1]}; }

ModeCoord shift_coord(const ModeCoord& c, const ModeOffset& o) {
  return ModeCoord{c[0] + o[0], c[1] + o[1]};
}

constexpr ModeOffset kZeroOffset{0, 0};

}  // namespace

ModeSpace::ModeSpace(int axes, int radius0, int radius1, int fiber)
    : axes_(axes), radius0_(radius0), radius1_(radius1), fiber_(fiber) {
  if (axes != 1 && axes != 2) throw std::invalid_argument("mode space needs 1 or 2 axes");
  if (radius0 < 0 || radius1 < 0) throw std::invalid_argument("negative lattice radius");
  if (axes == 1 && radius1 != 0)
    throw std::invalid_argument("one-axis lattice must have radius1 = 0");
  if (fiber < 1 || fiber > 8) throw std::invalid_argument("fiber dimension out of range");
}

std::shared_ptr<const ModeSpace> ModeSpace::line(int radius, int fiber) {
  return std::make_shared<ModeSpace>(1, radius, 0, fiber);
}

std::shared_ptr<const ModeSpace> ModeSpace::square(int radius, int fiber) {
  return std::make_shared<ModeSpace>(2, radius, radius, fiber);
}

int ModeSpace::boundary_distance(const ModeCoord& c) const {
  int d = radius0_ - std::abs(c[0]);
  if (axes_ == 2) d = std::min(d, radius1_ - std::abs(c[1]));
  return d;
}

ModeOperator::ModeOperator(std::shared_ptr<const ModeSpace> space)
    : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("null mode space");
}

ModeOperator ModeOperator::identity(std::shared_ptr<const ModeSpace> space) {
  const int f = space->fiber();
  return diagonal(std::move(space), [f](const ModeCoord&) {
    return Block(Block::Identity(f, f));
  });
}

ModeOperator ModeOperator::diagonal(std::shared_ptr<const ModeSpace> space,
                                    const std::function<Block(const ModeCoord&)>& f) {
  return shift(std::move(space), kZeroOffset, f);
}

ModeOperator ModeOperator::shift(std::shared_ptr<const ModeSpace> space,
                                 const ModeOffset& offset,
                                 const std::function<Block(const ModeCoord&)>& f) {
  ModeOperator out(std::move(space));
  const auto& sp = *out.space_;
  for (int j = 0; j < sp.modes(); ++j) {
    const ModeCoord c = sp.coordinate(j);
    if (!sp.contains(shift_coord(c, offset))) continue;
    Block b = f(c);
    if (b.rows() != sp.fiber() || b.cols() != sp.fiber())
      throw std::invalid_argument("fiber block has wrong shape");
    out.set_block(offset, j, b);
  }
  return out;
}

ModeOperator ModeOperator::interior_projection(std::shared_ptr<const ModeSpace> space,
                                               int margin) {
  const int f = space->fiber();
  const ModeSpace& sp = *space;
  return diagonal(space, [f, margin, &sp](const ModeCoord& c) {
    return sp.boundary_distance(c) >= margin ? Block(Block::Identity(f, f))
                                             : Block(Block::Zero(f, f));
  });
}

void ModeOperator::set_block(const ModeOffset& offset, int source_mode, const Block& b) {
  const ModeCoord src = space_->coordinate(source_mode);
  if (!space_->contains(shift_coord(src, offset))) return;  // dropped row
  auto it = terms_.find(offset);
  if (it == terms_.end()) {
    const int f = space_->fiber();
    it = terms_.emplace(offset, std::vector<Block>(space_->modes(), Block::Zero(f, f)))
             .first;
  }
  it->second[source_mode] = b;
}

const Block* ModeOperator::block(const ModeOffset& offset, int source_mode) const {
  auto it = terms_.find(offset);
  if (it == terms_.end()) return nullptr;
  return &it->second[source_mode];
}

std::vector<ModeOffset> ModeOperator::offsets() const {
  std::vector<ModeOffset> out;
  out.reserve(terms_.size());
  for (const auto& [o, blocks] : terms_) out.push_back(o);
  return out;
}

bool ModeOperator::is_zero(double tol) const { return max_abs() <= tol; }

bool ModeOperator::single_offset() const { return terms_.size() <= 1; }

bool ModeOperator::diagonal_only() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == kZeroOffset);
}

void ModeOperator::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    bool all_zero = true;
    for (const Block& b : it->second) {
      if (b.cwiseAbs().maxCoeff() != 0.0) {
        all_zero = false;
        break;
      }
    }
    it = all_zero ? terms_.erase(it) : ++it;
  }
}

ModeOperator ModeOperator::operator+(const ModeOperator& o) const {
  if (!space_->same_as(*o.space_))
    throw std::invalid_argument("mode operators live on different spaces");
  ModeOperator out = *this;
  for (const auto& [off, blocks] : o.terms_) {
    auto it = out.terms_.find(off);
    if (it == out.terms_.end()) {
      out.terms_.emplace(off, blocks);
    } else {
      for (std::size_t j = 0; j < blocks.size(); ++j) it->second[j] += blocks[j];
    }
  }
  out.prune();
  return out;
}

ModeOperator ModeOperator::operator-(const ModeOperator& o) const {
  return *this + o * Complex(-1.0, 0.0);
}

ModeOperator ModeOperator::operator*(Complex c) const {
  ModeOperator out = *this;
  for (auto& [off, blocks] : out.terms_)
    for (Block& b : blocks) b *= c;
  out.prune();
  return out;
}

ModeOperator ModeOperator::operator*(const ModeOperator& o) const {
  if (!space_->same_as(*o.space_))
    throw std::invalid_argument("mode operators live on different spaces");
  const ModeSpace& sp = *space_;
  const int f = sp.fiber();
  ModeOperator out(space_);
  for (const auto& [oa, ablocks] : terms_) {
    for (const auto& [ob, bblocks] : o.terms_) {
      const ModeOffset oc = add(oa, ob);
      std::vector<Block> cblocks(sp.modes(), Block::Zero(f, f));
      bool any = false;
      for (int j = 0; j < sp.modes(); ++j) {
        const ModeCoord src = sp.coordinate(j);
        const ModeCoord mid = shift_coord(src, ob);
        if (!sp.contains(mid) || !sp.contains(shift_coord(src, oc))) continue;
        const Block& bb = bblocks[j];
        const Block& ab = ablocks[sp.index(mid)];
        if (bb.cwiseAbs().maxCoeff() == 0.0 || ab.cwiseAbs().maxCoeff() == 0.0) continue;
        cblocks[j] = ab * bb;
        any = true;
      }
      if (!any) continue;
      auto it = out.terms_.find(oc);
      if (it == out.terms_.end()) {
        out.terms_.emplace(oc, std::move(cblocks));
      } else {
        for (int j = 0; j < sp.modes(); ++j) it->second[j] += cblocks[j];
      }
    }
  }
  out.prune();
  return out;
}

ModeOperator ModeOperator::adjoint() const {
  const ModeSpace& sp = *space_;
  const int f = sp.fiber();
  ModeOperator out(space_);
  for (const auto& [off, blocks] : terms_) {
    const ModeOffset no = negate(off);
    std::vector<Block> ablocks(sp.modes(), Block::Zero(f, f));
    for (int j = 0; j < sp.modes(); ++j) {
      const ModeCoord tgt = sp.coordinate(j);      // source of the adjoint term
      const ModeCoord src = shift_coord(tgt, no);  // source of the original term
      if (!sp.contains(src)) continue;
      ablocks[j] = blocks[sp.index(src)].adjoint();
    }
    out.terms_.emplace(no, std::move(ablocks));
  }
  out.prune();
  return out;
}

Complex ModeOperator::trace() const {
  auto it = terms_.find(kZeroOffset);
  if (it == terms_.end()) return Complex(0.0, 0.0);
  Complex acc(0.0, 0.0);
  for (const Block& b : it->second) acc += b.trace();
  return acc;
}

double ModeOperator::max_abs() const {
  double m = 0.0;
  for (const auto& [off, blocks] : terms_)
    for (const Block& b : blocks) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

SingularValueProfile ModeOperator::mu(Eigen::Index dense_limit) const {
  const Eigen::Index n = space_->dim();
  if (terms_.empty()) return SingularValueProfile(std::vector<double>(n, 0.0));
  if (terms_.size() == 1) {
    // T = sum_j E_{j+o,j} (x) B_j with distinct targets, so T*T is block
    // diagonal and the profile is the union of block singular values.
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(n));
    for (const Block& b : terms_.begin()->second) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        vals.push_back(svd.singularValues()(i));
    }
    vals.resize(static_cast<std::size_t>(n), 0.0);
    return SingularValueProfile(std::move(vals));
  }
  if (n > dense_limit)
    throw numeric_error("singular profile of a multi-band operator needs a dense "
                        "factorization beyond the configured dimension");
  return singular_values(dense());
}

double ModeOperator::trace_norm(Eigen::Index dense_limit) const {
  return mu(dense_limit).total();
}

double ModeOperator::operator_norm(Eigen::Index dense_limit) const {
  if (terms_.empty()) return 0.0;
  if (terms_.size() == 1) {
    double m = 0.0;
    for (const Block& b : terms_.begin()->second) {
      if (b.cwiseAbs().maxCoeff() == 0.0) continue;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      m = std::max(m, svd.singularValues()(0));
    }
    return m;
  }
  if (space_->dim() > dense_limit)
    throw numeric_error("operator norm of a multi-band operator needs a dense "
                        "factorization beyond the configured dimension");
  return nclab::operator_norm(dense());
}

double ModeOperator::operator_norm_bound() const {
  double acc = 0.0;
  for (const auto& [off, blocks] : terms_) {
    double m = 0.0;
    for (const Block& b : blocks) {
      if (b.cwiseAbs().maxCoeff() == 0.0) continue;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      m = std::max(m, svd.singularValues()(0));
    }
    acc += m;
  }
  return acc;
}

ModeOperator ModeOperator::compress_interior(int margin) const {
  const ModeSpace& sp = *space_;
  ModeOperator out(space_);
  for (const auto& [off, blocks] : terms_) {
    std::vector<Block> cblocks = blocks;
    for (int j = 0; j < sp.modes(); ++j) {
      const ModeCoord src = sp.coordinate(j);
      const ModeCoord tgt = shift_coord(src, off);
      if (!sp.contains(tgt) || sp.boundary_distance(src) < margin ||
          sp.boundary_distance(tgt) < margin)
        cblocks[j].setZero();
    }
    out.terms_.emplace(off, std::move(cblocks));
  }
  out.prune();
  return out;
}

ModeOperator ModeOperator::diagonal_part() const {
  ModeOperator out(space_);
  const auto it = terms_.find(ModeOffset{0, 0});
  if (it != terms_.end()) out.terms_.emplace(it->first, it->second);
  out.prune();
  return out;
}

ModeOperator ModeOperator::apply_function(const std::function<double(double)>& f) const {
  if (!diagonal_only())
    throw std::domain_error("per-block spectral calculus needs an offset-zero operator");
  const int fdim = space_->fiber();
  ModeOperator out(space_);
  std::vector<Block> blocks(space_->modes(), Block::Zero(fdim, fdim));
  const std::vector<Block>* in = nullptr;
  auto it = terms_.find(kZeroOffset);
  if (it != terms_.end()) in = &it->second;
  for (int j = 0; j < space_->modes(); ++j) {
    Eigen::MatrixXcd b = in ? Eigen::MatrixXcd((*in)[j]) : Eigen::MatrixXcd::Zero(fdim, fdim);
    const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::domain_error("per-block spectral calculus needs hermitian blocks");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (b + b.adjoint()));
    if (es.info() != Eigen::Success) throw numeric_error("block eigendecomposition failed");
    Eigen::VectorXcd mapped(fdim);
    for (int i = 0; i < fdim; ++i) {
      const double y = f(es.eigenvalues()(i));
      if (!std::isfinite(y))
        throw numeric_error("spectral function returned non-finite value");
      mapped(i) = Complex(y, 0.0);
    }
    Eigen::MatrixXcd m =
        es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
    blocks[j] = 0.5 * (m + m.adjoint().eval());
  }
  out.terms_.emplace(kZeroOffset, std::move(blocks));
  out.prune();
  return out;
}

ModeOperator ModeOperator::hermitian_part() const {
  return (*this + adjoint()) * Complex(0.5, 0.0);
}

ModeOperator ModeOperator::imaginary_part() const {
  return (*this - adjoint()) * Complex(0.0, -0.5);
}

Operator ModeOperator::dense() const {
  const ModeSpace& sp = *space_;
  const int f = sp.fiber();
  Matrix m = Matrix::Zero(sp.dim(), sp.dim());
  for (const auto& [off, blocks] : terms_) {
    for (int j = 0; j < sp.modes(); ++j) {
      const ModeCoord src = sp.coordinate(j);
      const ModeCoord tgt = shift_coord(src, off);
      if (!sp.contains(tgt)) continue;
      m.block(static_cast<Eigen::Index>(sp.index(tgt)) * f,
              static_cast<Eigen::Index>(j) * f, f, f) = blocks[j];
    }
  }
  return Operator(std::move(m), false);
}

ModeOperator commutator(const ModeOperator& a, const ModeOperator& b) {
  return a * b - b * a;
}

ModeOperator anticommutator(const ModeOperator& a, const ModeOperator& b) {
  return a * b + b * a;
}

std::pair<SingularValueProfile, SingularValueProfile> hermitian_spectral_split(
    const ModeOperator& t) {
  if (!t.diagonal_only())
    throw std::domain_error("spectral split needs an offset-zero operator");
  const auto n = static_cast<std::size_t>(t.space()->dim());
  std::vector<double> pos, neg;
  pos.reserve(n);
  neg.reserve(n);
  const int f = t.space()->fiber();
  for (int j = 0; j < t.space()->modes(); ++j) {
    const Block* b = t.block(ModeOffset{0, 0}, j);
    Eigen::MatrixXcd m = b ? Eigen::MatrixXcd(*b) : Eigen::MatrixXcd::Zero(f, f);
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw std::domain_error("spectral split needs hermitian blocks");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw numeric_error("block eigendecomposition failed");
    for (int i = 0; i < f; ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam >= 0.0)
        pos.push_back(lam);
      else
        neg.push_back(-lam);
    }
  }
  pos.resize(n, 0.0);
  neg.resize(n, 0.0);
  return {SingularValueProfile(std::move(pos)), SingularValueProfile(std::move(neg))};
}

}  // namespace nclab
