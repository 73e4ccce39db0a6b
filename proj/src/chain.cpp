#include "sympnet/chain.hpp"

#include <stdexcept>

namespace sympnet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Matrix SymplecticChain::apply_batch(const Matrix& inputs) const {
  if (inputs.rows() != 2 * d_) {
    throw std::invalid_argument("chain: input dimension " + std::to_string(inputs.rows()) +
                                " does not match 2d = " + std::to_string(2 * d_));
  }
  const int d = d_;
  Matrix x = inputs;
  for (const auto& layer : layers_) {
    std::visit(Overloaded{
                   [&](const ShearLayer& l) {
                     if (l.side == Side::Upper) {
                       x.topRows(d).noalias() += l.s * x.bottomRows(d);
                     } else {
                       x.bottomRows(d).noalias() += l.s * x.topRows(d);
                     }
                   },
                   [&](const ShiftLayer& l) { x.colwise() += l.offset; },
                   [&](const GateLayer& l) {
                     if (l.side == Side::Upper) {
                       x.topRows(d) += l.coeff * activate(l.activation, x.bottomRows(d).array()).matrix();
                     } else {
                       x.bottomRows(d) += l.coeff * activate(l.activation, x.topRows(d).array()).matrix();
                     }
                   },
               },
               layer);
  }
  return x;
}

Vector SymplecticChain::operator()(const Vector& x) const {
  check_phase_point(x, d_);
  return apply_batch(x);
}

Matrix SymplecticChain::jacobian(const Vector& x) const {
  check_phase_point(x, d_);
  const int d = d_;
  Vector state = x;
  Matrix jac = Matrix::Identity(2 * d, 2 * d);
  for (const auto& layer : layers_) {
    std::visit(Overloaded{
                   [&](const ShearLayer& l) {
                     if (l.side == Side::Upper) {
                       state.head(d) += l.s * state.tail(d);
                       jac.topRows(d) += l.s * jac.bottomRows(d);
                     } else {
                       state.tail(d) += l.s * state.head(d);
                       jac.bottomRows(d) += l.s * jac.topRows(d);
                     }
                   },
                   [&](const ShiftLayer& l) { state += l.offset; },
                   [&](const GateLayer& l) {
                     auto src = l.side == Side::Upper ? state.tail(d) : state.head(d);
                     const Eigen::ArrayXd act = activate(l.activation, src.array());
                     const Eigen::ArrayXd slope = l.coeff * activation_slope(l.activation, act);
                     if (l.side == Side::Upper) {
                       state.head(d) += l.coeff * act.matrix();
                       jac.topRows(d) += slope.matrix().asDiagonal() * jac.bottomRows(d);
                     } else {
                       state.tail(d) += l.coeff * act.matrix();
                       jac.bottomRows(d) += slope.matrix().asDiagonal() * jac.topRows(d);
                     }
                   },
               },
               layer);
  }
  return jac;
}

SymplecticChain to_chain(const SympNet& net) {
  const double h = net.step();
  std::vector<ChainLayer> layers;
  auto push_linear = [&](const LinearUnit& unit) {
    for (const auto& s : unit.sublayers) layers.push_back(ShearLayer{s.side, h * s.symmetric()});
    layers.push_back(ShiftLayer{h * unit.bias});
  };
  const auto& linear = net.linear_units();
  const auto& gates = net.gates();
  push_linear(linear[0]);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    layers.push_back(GateLayer{gates[g].side, h * gates[g].scale, net.activation()});
    push_linear(linear[g + 1]);
  }
  return SymplecticChain(net.dof(), std::move(layers));
}

SymplecticChain inverse(const SymplecticChain& chain) {
  std::vector<ChainLayer> layers;
  layers.reserve(chain.layers().size());
  for (auto it = chain.layers().rbegin(); it != chain.layers().rend(); ++it) {
    layers.push_back(std::visit(
        Overloaded{
            [](const ShearLayer& l) -> ChainLayer { return ShearLayer{l.side, -l.s}; },
            [](const ShiftLayer& l) -> ChainLayer { return ShiftLayer{-l.offset}; },
            [](const GateLayer& l) -> ChainLayer {
              return GateLayer{l.side, -l.coeff, l.activation};
            },
        },
        *it));
  }
  return SymplecticChain(chain.dof(), std::move(layers));
}

SymplecticChain inverse(const SympNet& net) { return inverse(to_chain(net)); }

SymplecticChain compose(const SymplecticChain& outer, const SymplecticChain& inner) {
  if (outer.dof() != inner.dof()) throw std::invalid_argument("compose: dimension mismatch");
  std::vector<ChainLayer> layers = inner.layers();
  layers.insert(layers.end(), outer.layers().begin(), outer.layers().end());
  return SymplecticChain(inner.dof(), std::move(layers));
}

SymplecticChain symmetric_compose(const SympNet& net) {
  return compose(inverse(net.with_step(-net.step())), to_chain(net));
}

}  // namespace sympnet
