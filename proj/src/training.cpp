#include "sympnet/training.hpp"

#include "sympnet/format.hpp"

namespace sympnet {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
  if (log_every < 1) throw std::invalid_argument("train: log_every must be >= 1");
  if (!(w_penalty >= 0.0)) throw std::invalid_argument("train: w_penalty must be >= 0");
}

void write_loss_csv(std::ostream& out, const std::vector<LossRecord>& history) {
  out << "epoch,mse_d,mse_s\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << format_double(r.mse_d) << ',';
    if (r.mse_s) out << format_double(*r.mse_s);
    out << '\n';
  }
}

}  // namespace sympnet
