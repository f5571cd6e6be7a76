#pragma once

#include "nclab/operator.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace nclab {

using ModeCoord = std::array<int, 2>;
using ModeOffset = std::array<int, 2>;

// Rectangular lattice of Fourier modes with a fixed fiber dimension (spin or
// doubling components).  Axis 1 collapses to radius 0 for one dimensional
// lattices.
class ModeSpace {
 public:
  ModeSpace(int axes, int radius0, int radius1, int fiber);

  static std::shared_ptr<const ModeSpace> line(int radius, int fiber);
  static std::shared_ptr<const ModeSpace> square(int radius, int fiber);

  int axes() const { return axes_; }
  int fiber() const { return fiber_; }
  int radius(int axis) const { return axis == 0 ? radius0_ : radius1_; }
  int modes() const { return (2 * radius0_ + 1) * (2 * radius1_ + 1); }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(modes()) * fiber_; }

  bool contains(const ModeCoord& c) const {
    return std::abs(c[0]) <= radius0_ && std::abs(c[1]) <= radius1_;
  }
  int index(const ModeCoord& c) const {
    return (c[0] + radius0_) * (2 * radius1_ + 1) + (c[1] + radius1_);
  }
  ModeCoord coordinate(int index) const {
    const int w = 2 * radius1_ + 1;
    return ModeCoord{index / w - radius0_, index % w - radius1_};
  }
  // Distance to the lattice boundary, minimized over active axes.
  int boundary_distance(const ModeCoord& c) const;

  bool same_as(const ModeSpace& o) const {
    return axes_ == o.axes_ && radius0_ == o.radius0_ && radius1_ == o.radius1_ &&
           fiber_ == o.fiber_;
  }

 private:
  int axes_;
  int radius0_;
  int radius1_;
  int fiber_;
};

using Block = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// Banded lattice operator: finitely many offsets, each carrying one fiber
// block per source mode.  Truncation is non-wrapping; a block is structurally
// zero whenever its source or target mode leaves the lattice.  The
// representation is closed under sums, products and adjoints, traces and
// (for single-offset operators) singular value profiles are exact and cost
// O(modes * fiber^3).
class ModeOperator {
 public:
  explicit ModeOperator(std::shared_ptr<const ModeSpace> space);

  static ModeOperator identity(std::shared_ptr<const ModeSpace> space);
  static ModeOperator diagonal(std::shared_ptr<const ModeSpace> space,
                               const std::function<Block(const ModeCoord&)>& f);
  static ModeOperator shift(std::shared_ptr<const ModeSpace> space,
                            const ModeOffset& offset,
                            const std::function<Block(const ModeCoord&)>& f);
  static ModeOperator interior_projection(std::shared_ptr<const ModeSpace> space,
                                          int margin);

  const std::shared_ptr<const ModeSpace>& space() const { return space_; }

  void set_block(const ModeOffset& offset, int source_mode, const Block& b);
  const Block* block(const ModeOffset& offset, int source_mode) const;

  std::vector<ModeOffset> offsets() const;
  bool is_zero(double tol = 0.0) const;
  bool single_offset() const;
  bool diagonal_only() const;

  ModeOperator operator+(const ModeOperator& o) const;
  ModeOperator operator-(const ModeOperator& o) const;
  ModeOperator operator*(const ModeOperator& o) const;
  ModeOperator operator*(Complex c) const;
  ModeOperator adjoint() const;

  Complex trace() const;
  // Largest entry magnitude over all blocks; exact sup over matrix entries.
  double max_abs() const;

  // Exact profile for single-offset operators (per-mode factorization); for
  // general band operators falls back to a dense factorization, guarded by
  // dense_limit.
  SingularValueProfile mu(Eigen::Index dense_limit = 4096) const;
  double trace_norm(Eigen::Index dense_limit = 4096) const;
  double operator_norm(Eigen::Index dense_limit = 4096) const;
  // Triangle-inequality bound sum_offsets max_mode ||block||; cheap and valid
  // for residual gates.
  double operator_norm_bound() const;

  ModeOperator compress_interior(int margin) const;
  // Offset-zero component; the rest of the band structure is discarded.
  ModeOperator diagonal_part() const;

  // Per-block spectral calculus; requires an offset-zero hermitian operator.
  ModeOperator apply_function(const std::function<double(double)>& f) const;

  // Cartesian decomposition T = H + iK with both parts hermitian.
  ModeOperator hermitian_part() const;
  ModeOperator imaginary_part() const;

  Operator dense() const;

 private:
  void prune();

  std::shared_ptr<const ModeSpace> space_;
  std::map<ModeOffset, std::vector<Block>> terms_;
};

ModeOperator commutator(const ModeOperator& a, const ModeOperator& b);
ModeOperator anticommutator(const ModeOperator& a, const ModeOperator& b);

// Eigenvalues of the hermitian offset-zero operator split into positive part
// and negative part magnitudes (both as descending profiles of the full
// space dimension, padded with zeros).
std::pair<SingularValueProfile, SingularValueProfile> hermitian_spectral_split(
    const ModeOperator& t);

}  // namespace nclab
