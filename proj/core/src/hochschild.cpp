#include "nclab/hochschild.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace nclab {

HochschildChain::HochschildChain(int degree, std::vector<ChainTerm> terms)
    : degree_(degree), terms_(std::move(terms)) {
  if (degree < 0) throw std::invalid_argument("chain degree must be non-negative");
  for (const ChainTerm& t : terms_)
    if (t.factors.size() != static_cast<std::size_t>(degree) + 1)
      throw std::invalid_argument("chain term has wrong number of tensor slots");
}

HochschildChain HochschildChain::operator+(const HochschildChain& o) const {
  if (degree_ != o.degree_)
    throw std::invalid_argument("cannot add chains of different degree");
  std::vector<ChainTerm> sum = terms_;
  sum.insert(sum.end(), o.terms_.begin(), o.terms_.end());
  return HochschildChain(degree_, std::move(sum));
}

HochschildChain HochschildChain::operator*(Complex c) const {
  std::vector<ChainTerm> scaled = terms_;
  for (ChainTerm& t : scaled) t.coefficient *= c;
  return HochschildChain(degree_, std::move(scaled));
}

std::string word_product(const std::string& a, const std::string& b) {
  if (a == "1") return b;
  if (b == "1") return a;
  return a + b;
}

HochschildChain boundary(const HochschildChain& c) {
  if (c.degree() == 0) throw std::domain_error("degree zero chains have no boundary");
  const int k = c.degree();
  std::vector<ChainTerm> out;
  out.reserve(c.terms().size() * static_cast<std::size_t>(k + 1));
  const double wrap_sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (const ChainTerm& t : c.terms()) {
    for (int j = 0; j < k; ++j) {
      ChainTerm contracted;
      contracted.coefficient = t.coefficient * ((j % 2 == 0) ? 1.0 : -1.0);
      for (int s = 0; s <= k; ++s) {
        if (s == j) {
          contracted.factors.push_back(word_product(t.factors[static_cast<std::size_t>(s)],
                                                    t.factors[static_cast<std::size_t>(s + 1)]));
          ++s;
        } else {
          contracted.factors.push_back(t.factors[static_cast<std::size_t>(s)]);
        }
      }
      out.push_back(std::move(contracted));
    }
    ChainTerm wrap;
    wrap.coefficient = t.coefficient * wrap_sign;
    wrap.factors.push_back(
        word_product(t.factors.back(), t.factors.front()));
    for (int s = 1; s < k; ++s) wrap.factors.push_back(t.factors[static_cast<std::size_t>(s)]);
    out.push_back(std::move(wrap));
  }
  return HochschildChain(k - 1, std::move(out));
}

ModeOperator ProductShape::word(const std::vector<ModeOperator>& args) const {
  if (args.size() != derivations.size() + 1)
    throw std::invalid_argument("argument count does not match the shape degree");
  ModeOperator acc = args[0];
  for (std::size_t j = 1; j < args.size(); ++j) acc = acc * derivations[j - 1](args[j]);
  return acc;
}

Complex ProductShape::operator()(const ModeOperator& omega) const {
  return trace(omega * right);
}

CochainFunctional::CochainFunctional(int degree, Evaluator eval)
    : degree_(degree), eval_(std::move(eval)) {
  if (degree < 0) throw std::invalid_argument("cochain degree must be non-negative");
  if (!eval_) throw std::invalid_argument("cochain needs an evaluator");
}

CochainFunctional::CochainFunctional(ProductShape shape)
    : degree_(shape.degree()), shape_(std::move(shape)) {
  const ProductShape& s = *shape_;
  eval_ = [s](const std::vector<ModeOperator>& args) { return s(s.word(args)); };
}

const ProductShape& CochainFunctional::shape() const {
  if (!shape_) throw std::domain_error("functional carries no product shape");
  return *shape_;
}

Complex CochainFunctional::operator()(const std::vector<ModeOperator>& args) const {
  if (args.size() != static_cast<std::size_t>(degree_) + 1)
    throw std::invalid_argument("argument count does not match the cochain degree");
  return eval_(args);
}

CochainFunctional coboundary(const CochainFunctional& phi) {
  const int n = phi.degree();
  return CochainFunctional(
      n + 1, [phi, n](const std::vector<ModeOperator>& args) {
        Complex acc = 0;
        double sign = 1.0;
        for (int j = 0; j <= n; ++j) {
          std::vector<ModeOperator> merged;
          merged.reserve(args.size() - 1);
          for (std::size_t s = 0; s < args.size(); ++s) {
            if (s == static_cast<std::size_t>(j)) {
              merged.push_back(args[s] * args[s + 1]);
              ++s;
            } else {
              merged.push_back(args[s]);
            }
          }
          acc += sign * phi(merged);
          sign = -sign;
        }
        std::vector<ModeOperator> wrap;
        wrap.reserve(args.size() - 1);
        wrap.push_back(args.back() * args.front());
        for (std::size_t s = 1; s + 1 < args.size(); ++s) wrap.push_back(args[s]);
        acc += sign * phi(wrap);
        return acc;
      });
}

Complex pair(const SpectralTripleModel& model, const CochainFunctional& phi,
             const HochschildChain& c) {
  if (phi.degree() != c.degree())
    throw std::invalid_argument("cochain and chain degree differ in pairing");
  Complex acc = 0;
  for (const ChainTerm& t : c.terms()) {
    std::vector<ModeOperator> args;
    args.reserve(t.factors.size());
    for (const std::string& w : t.factors) args.push_back(model.resolve(w));
    acc += t.coefficient * phi(args);
  }
  return acc;
}

double cycle_residual(const SpectralTripleModel& model, const HochschildChain& c,
                      int probes) {
  const HochschildChain bc = boundary(c);
  const int margin = c.degree();

  // Resolve each distinct word once, compressed to the interior.
  std::vector<std::vector<ModeOperator>> resolved;
  resolved.reserve(bc.terms().size());
  for (const ChainTerm& t : bc.terms()) {
    std::vector<ModeOperator> ops;
    ops.reserve(t.factors.size());
    for (const std::string& w : t.factors)
      ops.push_back(model.resolve(w).compress_interior(margin));
    resolved.push_back(std::move(ops));
  }

  // Multilinear probes R0 A0 R1 A1 ... with deterministic random diagonal
  // R's, summed as operators: a scalar trace would silently discard every
  // band with nonzero total offset, so the residual is measured entrywise.
  std::mt19937 rng(0x5eedc41e);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto space = model.space();
  const int slots = bc.degree() + 1;

  double worst = 0.0;
  for (int r = 0; r < probes; ++r) {
    std::vector<ModeOperator> probe;
    probe.reserve(static_cast<std::size_t>(slots));
    for (int j = 0; j < slots; ++j) {
      probe.push_back(ModeOperator::diagonal(space, [&](const ModeCoord&) {
        Block b(space->fiber(), space->fiber());
        for (Eigen::Index row = 0; row < b.rows(); ++row)
          for (Eigen::Index col = 0; col < b.cols(); ++col)
            b(row, col) = Complex(unif(rng), unif(rng));
        return b;
      }));
    }
    std::optional<ModeOperator> total;
    double scale = 0.0;
    for (std::size_t i = 0; i < resolved.size(); ++i) {
      ModeOperator prod = probe[0] * resolved[i][0];
      for (int j = 1; j < slots; ++j)
        prod = prod * probe[static_cast<std::size_t>(j)] * resolved[i][static_cast<std::size_t>(j)];
      prod = prod * bc.terms()[i].coefficient;
      scale = std::max(scale, prod.max_abs());
      if (total)
        *total = *total + prod;
      else
        total = std::move(prod);
    }
    if (total && scale > 0.0) worst = std::max(worst, total->max_abs() / scale);
  }
  return worst;
}

bool is_cycle(const SpectralTripleModel& model, const HochschildChain& c, double tol,
              int probes) {
  return cycle_residual(model, c, probes) <= tol;
}

namespace {

struct MarkedSlot {
  ModeOperator op;
  bool differentiated;
};
using MarkedWord = std::vector<MarkedSlot>;

// One contraction step: every adjacent pair of derivation slots merges into
// a plain product.
std::vector<MarkedWord> contract_once(const std::vector<MarkedWord>& words) {
  std::vector<MarkedWord> out;
  for (const MarkedWord& w : words) {
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
      if (!w[j].differentiated || !w[j + 1].differentiated) continue;
      MarkedWord merged;
      merged.reserve(w.size() - 1);
      merged.insert(merged.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(j));
      merged.push_back({w[j].op * w[j + 1].op, false});
      merged.insert(merged.end(), w.begin() + static_cast<std::ptrdiff_t>(j) + 2, w.end());
      out.push_back(std::move(merged));
    }
  }
  return out;
}

}  // namespace

CochainFunctional cup_sigma(const CochainFunctional& phi) {
  if (!phi.has_shape() || !phi.shape().uniform)
    throw std::invalid_argument(
        "contraction needs a product-shape functional with a uniform derivation");
  const ProductShape s = phi.shape();
  const int power = phi.contraction_power() + 1;
  const int degree = phi.degree() + 2;

  CochainFunctional out(
      degree, [s, power](const std::vector<ModeOperator>& args) {
        const auto derivation =
            s.derivations.empty()
                ? std::function<ModeOperator(const ModeOperator&)>(
                      [](const ModeOperator& a) { return a; })
                : s.derivations.front();
        MarkedWord base;
        base.reserve(args.size());
        base.push_back({args[0], false});
        for (std::size_t j = 1; j < args.size(); ++j) base.push_back({args[j], true});
        std::vector<MarkedWord> words{base};
        for (int i = 0; i < power; ++i) words = contract_once(words);
        Complex acc = 0;
        for (const MarkedWord& w : words) {
          ModeOperator prod = w[0].op;
          for (std::size_t j = 1; j < w.size(); ++j)
            prod = prod * (w[j].differentiated ? derivation(w[j].op) : w[j].op);
          acc += s(prod);
        }
        return acc;
      });
  out.shape_ = s;
  out.power_ = power;
  return out;
}

CochainFunctional contraction_power(const CochainFunctional& phi, int i) {
  if (i < 0) throw std::invalid_argument("contraction power must be non-negative");
  CochainFunctional out = phi;
  for (int j = 0; j < i; ++j) out = cup_sigma(out);
  return out;
}

ModeOperator shat(int power, const std::vector<ModeOperator>& args,
                  const SpectralTripleModel& model) {
  if (power < 0) throw std::invalid_argument("shat power must be non-negative");
  if (args.empty()) throw std::invalid_argument("shat needs at least one argument");
  if (power == 0) {
    ModeOperator acc = args[0];
    for (std::size_t j = 1; j < args.size(); ++j) acc = acc * model.d(args[j]);
    return acc;
  }
  ModeOperator out(model.space());
  if (args.size() <= 2) return out;
  const int n = static_cast<int>(args.size()) - 1;
  double binom = 1.0;  // C(power-1, j), updated multiplicatively
  for (int j = 0; j <= power - 1; ++j) {
    if (j > 0) binom = binom * (power - j) / j;
    for (int i = 1; i <= n - 1; ++i) {
      // Left block keeps args[0..i-1]; right block starts with the plain
      // product args[i]*args[i+1].
      if (j >= 1 && i <= 2) continue;
      const int right_power = power - 1 - j;
      const int right_size = n - i;
      if (right_power >= 1 && right_size <= 2) continue;
      const std::vector<ModeOperator> left(args.begin(),
                                           args.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<ModeOperator> right;
      right.reserve(static_cast<std::size_t>(right_size));
      right.push_back(args[static_cast<std::size_t>(i)] * args[static_cast<std::size_t>(i) + 1]);
      right.insert(right.end(), args.begin() + static_cast<std::ptrdiff_t>(i) + 2, args.end());
      out = out + shat(j, left, model) * shat(right_power, right, model) * Complex(binom, 0);
    }
  }
  return out;
}

double s_power_consistency(const SpectralTripleModel& model,
                           const CochainFunctional& phi, int i,
                           const std::vector<std::string>& words) {
  std::vector<ModeOperator> args;
  args.reserve(words.size());
  for (const std::string& w : words) args.push_back(model.resolve(w));
  const Complex lhs = contraction_power(phi, i)(args);
  const Complex rhs = phi.shape()(shat(i, args, model));
  return std::abs(lhs - rhs);
}

}  // namespace nclab
