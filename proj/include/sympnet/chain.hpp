#pragma once

#include "sympnet/sympnet.hpp"

#include <variant>
#include <vector>

namespace sympnet {

// Elementary symplectic maps with closed-form inverses. A SympNet, its inverse
// and its symmetric composition are all expressed as chains of these.

/// Upper: p += S q. Lower: q += S p. S is symmetric and already h-scaled.
struct ShearLayer {
  Side side;
  Matrix s;
};

/// x += offset.
struct ShiftLayer {
  Vector offset;
};

/// Upper: p += coeff * sigma(q). Lower: q += coeff * sigma(p).
struct GateLayer {
  Side side;
  double coeff;
  Activation activation;
};

using ChainLayer = std::variant<ShearLayer, ShiftLayer, GateLayer>;

/// Composition of elementary layers, applied front to back.
class SymplecticChain {
 public:
  explicit SymplecticChain(int d) : d_(d) {}
  SymplecticChain(int d, std::vector<ChainLayer> layers) : d_(d), layers_(std::move(layers)) {}

  int dof() const { return d_; }
  const std::vector<ChainLayer>& layers() const { return layers_; }

  Vector operator()(const Vector& x) const;
  Matrix apply_batch(const Matrix& inputs) const;
  Matrix jacobian(const Vector& x) const;

 private:
  int d_;
  std::vector<ChainLayer> layers_;
};

/// The network as a chain; evaluates identically to forward().
SymplecticChain to_chain(const SympNet& net);

/// Exact inverse: layers reversed, each inverted in closed form.
SymplecticChain inverse(const SymplecticChain& chain);
SymplecticChain inverse(const SympNet& net);

/// outer o inner.
SymplecticChain compose(const SymplecticChain& outer, const SymplecticChain& inner);

/// Phi_{-h}^{-1} o Phi_h, a symmetric one-step map: its inverse is the same
/// construction at -h.
SymplecticChain symmetric_compose(const SympNet& net);

}  // namespace sympnet
