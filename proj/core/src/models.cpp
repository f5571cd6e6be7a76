#include "nclab/models.hpp"

#include <cmath>

namespace nclab {

namespace {

double block_spectral_radius(const Block& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(b)};
  if (es.info() != Eigen::Success) throw numeric_error("block eigendecomposition failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double block_spectral_gap(const Block& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(b)};
  if (es.info() != Eigen::Success) throw numeric_error("block eigendecomposition failed");
  return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace

SpectralTripleModel::SpectralTripleModel(std::string name, int truncation,
                                         int summability,
                                         std::shared_ptr<const ModeSpace> space,
                                         ModeOperator dirac,
                                         std::optional<ModeOperator> grading,
                                         std::vector<Generator> generators, double mass,
                                         std::optional<ModeOperator> unit)
    : name_(std::move(name)),
      truncation_(truncation),
      summability_(summability),
      space_(space),
      dirac_(std::move(dirac)),
      abs_dirac_(dirac_.apply_function([](double x) { return std::abs(x); })),
      grading_(std::move(grading)),
      grading_id_(grading_ ? *grading_ : ModeOperator::identity(space)),
      unit_(unit ? std::move(*unit) : ModeOperator::identity(space)),
      generators_(std::move(generators)),
      mass_(mass) {
  if (summability_ < 1) throw std::invalid_argument("summability exponent must be >= 1");
  if (!dirac_.diagonal_only())
    throw std::invalid_argument("dirac operator must be offset-zero in the mode basis");
  // Gap and spectral bound from the per-mode blocks, exact for offset-zero D.
  double gap = std::numeric_limits<double>::infinity();
  double top = 0.0;
  for (int j = 0; j < space_->modes(); ++j) {
    const Block* b = dirac_.block(ModeOffset{0, 0}, j);
    Eigen::MatrixXcd m = b ? Eigen::MatrixXcd(*b)
                           : Eigen::MatrixXcd::Zero(space_->fiber(), space_->fiber());
    gap = std::min(gap, block_spectral_gap(Block(m)));
    top = std::max(top, block_spectral_radius(Block(m)));
  }
  gap_ = gap;
  lambda_max_ = top;
  invertible_ = gap_ > 1e-12 * std::max(1.0, lambda_max_);
  if (invertible_) {
    sign_ = dirac_.apply_function([](double x) { return x >= 0.0 ? 1.0 : -1.0; });
    inverse_ = dirac_.apply_function([](double x) { return 1.0 / x; });
  }
  if (grading_) {
    const double scale = std::max(1.0, lambda_max_);
    if ((*grading_ * *grading_ - ModeOperator::identity(space_)).max_abs() > 1e-12)
      throw std::invalid_argument("grading must square to the identity");
    if ((*grading_ - grading_->adjoint()).max_abs() > 1e-12)
      throw std::invalid_argument("grading must be self-adjoint");
    if (anticommutator(*grading_, dirac_).max_abs() > 1e-12 * scale)
      throw std::invalid_argument("grading must anticommute with the dirac operator");
  }
}

const ModeOperator& SpectralTripleModel::sign_dirac() const {
  if (!sign_)
    throw std::domain_error("dirac operator has no spectral gap; double the triple first");
  return *sign_;
}

const ModeOperator& SpectralTripleModel::dirac_inverse() const {
  if (!inverse_)
    throw std::domain_error("dirac operator has no spectral gap; double the triple first");
  return *inverse_;
}

ModeOperator SpectralTripleModel::pre_sign() const {
  return dirac_.apply_function([](double x) { return x / std::sqrt(1.0 + x * x); });
}

ModeOperator SpectralTripleModel::function_of_dirac(
    const std::function<double(double)>& f) const {
  return dirac_.apply_function(f);
}

ModeOperator SpectralTripleModel::function_of_abs_dirac(
    const std::function<double(double)>& f) const {
  return abs_dirac_.apply_function(f);
}

ModeOperator SpectralTripleModel::delta_k(const ModeOperator& a, int k) const {
  if (k < 0) throw std::domain_error("negative derivation order");
  ModeOperator out = a;
  for (int i = 0; i < k; ++i) out = delta(out);
  return out;
}

ModeOperator SpectralTripleModel::resolve(const std::string& word) const {
  if (word.empty()) throw std::invalid_argument("empty generator word");
  ModeOperator out = unit_;
  std::size_t i = 0;
  while (i < word.size()) {
    const char c = word[i];
    if (c == '1') {
      ++i;
      continue;
    }
    std::string sym(1, c);
    bool star = false;
    if (i + 1 < word.size() && word[i + 1] == '*') {
      star = true;
      ++i;
    }
    ++i;
    const Generator* gen = nullptr;
    for (const Generator& g : generators_)
      if (g.symbol == sym) gen = &g;
    if (!gen)
      throw std::invalid_argument("unknown generator symbol '" + sym + "' in word '" +
                                  word + "'");
    out = out * (star ? gen->op.adjoint() : gen->op);
  }
  return out;
}

SpectralTripleModel build_circle(int n) {
  if (n < 8) throw std::invalid_argument("circle truncation must satisfy N >= 8");
  auto space = ModeSpace::line(n, 1);
  ModeOperator dirac = ModeOperator::diagonal(space, [](const ModeCoord& c) {
    Block b(1, 1);
    b(0, 0) = Complex(static_cast<double>(c[0]), 0.0);
    return b;
  });
  ModeOperator u = ModeOperator::shift(space, ModeOffset{1, 0}, [](const ModeCoord&) {
    Block b(1, 1);
    b(0, 0) = Complex(1.0, 0.0);
    return b;
  });
  return SpectralTripleModel("circle", n, 1, space, std::move(dirac), std::nullopt,
                             {Generator{"u", std::move(u)}});
}

SpectralTripleModel build_torus2(int n) {
  if (n < 4) throw std::invalid_argument("torus truncation must satisfy N >= 4");
  auto space = ModeSpace::square(n, 2);
  ModeOperator dirac = ModeOperator::diagonal(space, [](const ModeCoord& c) {
    Block b = Block::Zero(2, 2);
    b(0, 1) = Complex(c[0], -c[1]);
    b(1, 0) = Complex(c[0], c[1]);
    return b;
  });
  ModeOperator grading = ModeOperator::diagonal(space, [](const ModeCoord&) {
    Block b = Block::Zero(2, 2);
    b(0, 0) = Complex(1.0, 0.0);
    b(1, 1) = Complex(-1.0, 0.0);
    return b;
  });
  const auto ident = [](const ModeCoord&) { return Block(Block::Identity(2, 2)); };
  ModeOperator u = ModeOperator::shift(space, ModeOffset{1, 0}, ident);
  ModeOperator v = ModeOperator::shift(space, ModeOffset{0, 1}, ident);
  return SpectralTripleModel("torus2", n, 2, space, std::move(dirac), std::move(grading),
                             {Generator{"u", std::move(u)}, Generator{"v", std::move(v)}});
}

std::vector<std::string> model_names() { return {"circle", "torus2"}; }

SpectralTripleModel build_model(const std::string& name, int truncation) {
  if (name == "circle") return build_circle(truncation);
  if (name == "torus2") return build_torus2(truncation);
  throw std::invalid_argument("unknown model '" + name + "'; known: circle, torus2");
}

DoubledTriple make_double(const SpectralTripleModel& base, double mass) {
  if (!(mass > 0.0)) throw std::domain_error("doubling mass must be positive");
  const int f = base.space()->fiber();
  auto space = std::make_shared<ModeSpace>(base.space()->axes(), base.space()->radius(0),
                                           base.space()->radius(1), 2 * f);

  const auto lift_diag = [&](const ModeOperator& op, double upper_scale,
                             double lower_scale) {
    return ModeOperator::diagonal(space, [&, f](const ModeCoord& c) {
      const Block* b = op.block(ModeOffset{0, 0}, op.space()->index(c));
      Block big = Block::Zero(2 * f, 2 * f);
      if (b) {
        big.topLeftCorner(f, f) = *b * Complex(upper_scale, 0.0);
        big.bottomRightCorner(f, f) = *b * Complex(lower_scale, 0.0);
      }
      return big;
    });
  };

  ModeOperator dirac = lift_diag(base.dirac(), 1.0, -1.0);
  {
    // off-diagonal mass coupling
    ModeOperator coupling = ModeOperator::diagonal(space, [f, mass](const ModeCoord&) {
      Block big = Block::Zero(2 * f, 2 * f);
      big.topRightCorner(f, f) = Block::Identity(f, f) * Complex(mass, 0.0);
      big.bottomLeftCorner(f, f) = Block::Identity(f, f) * Complex(mass, 0.0);
      return big;
    });
    dirac = dirac + coupling;
  }

  std::optional<ModeOperator> grading;
  if (base.even()) grading = lift_diag(*base.grading(), 1.0, -1.0);

  std::vector<Generator> gens;
  for (const Generator& g : base.generators()) {
    ModeOperator lifted(space);
    for (const ModeOffset& off : g.op.offsets()) {
      for (int j = 0; j < base.space()->modes(); ++j) {
        const Block* b = g.op.block(off, j);
        if (!b || b->cwiseAbs().maxCoeff() == 0.0) continue;
        Block big = Block::Zero(2 * f, 2 * f);
        big.topLeftCorner(f, f) = *b;
        lifted.set_block(off, j, big);
      }
    }
    gens.push_back(Generator{g.symbol, std::move(lifted)});
  }

  SpectralTripleModel doubled(base.name() + "+mass", base.truncation(),
                              base.summability(), space, std::move(dirac),
                              std::move(grading), std::move(gens), mass,
                              lift_diag(base.unit(), 1.0, 0.0));
  if (doubled.spectral_gap() < mass - 1e-10)
    throw numeric_error("doubled dirac operator lost its mass gap");
  return DoubledTriple{std::move(doubled), mass, base.name()};
}

}  // namespace nclab
