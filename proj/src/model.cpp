#include "smrsd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace smrsd {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::uint32_t binary_to_gray(std::uint32_t v) { return v ^ (v >> 1); }

}  // namespace

void SystemConfig::validate() const {
  if (qam_order != 4 && qam_order != 16 && qam_order != 64) {
    throw std::invalid_argument("SystemConfig: qam_order must be 4, 16 or 64");
  }
  if (!is_power_of_two(num_tx)) {
    throw std::invalid_argument("SystemConfig: num_tx must be a power of two");
  }
  if (num_rx < 1) {
    throw std::invalid_argument("SystemConfig: num_rx must be >= 1");
  }
  if (psi_row < 1 || psi_row > num_rx) {
    throw std::invalid_argument("SystemConfig: psi_row must be in [1, num_rx]");
  }
  if (psi_col < 1 || psi_col > hypotheses()) {
    throw std::invalid_argument(
        "SystemConfig: psi_col must be in [1, qam_order*num_tx]");
  }
  if (!std::isfinite(snr_db)) {
    throw std::invalid_argument("SystemConfig: snr_db must be finite");
  }
}

Constellation build_qam(int order) {
  if (order != 4 && order != 16 && order != 64) {
    throw std::invalid_argument("build_qam: order must be 4, 16 or 64");
  }
  const int per_axis = static_cast<int>(std::lround(std::sqrt(order)));
  const int axis_bits = std::bit_width(static_cast<unsigned>(per_axis)) - 1;
  // Mean squared magnitude of the raw +-1, +-3, ... grid.
  const double energy = 2.0 * (per_axis * per_axis - 1) / 3.0;
  const double scale = 1.0 / std::sqrt(energy);

  Constellation c;
  c.bits = 2 * axis_bits;
  c.points.resize(order);
  c.labels.resize(order);
  c.label_to_index.assign(order, -1);
  for (int i = 0; i < per_axis; ++i) {
    for (int q = 0; q < per_axis; ++q) {
      const int index = i * per_axis + q;
      const double re = (2.0 * i - (per_axis - 1)) * scale;
      const double im = (2.0 * q - (per_axis - 1)) * scale;
      c.points(index) = {re, im};
      const std::uint32_t label =
          (binary_to_gray(static_cast<std::uint32_t>(i)) << axis_bits) |
          binary_to_gray(static_cast<std::uint32_t>(q));
      c.labels[index] = label;
      c.label_to_index[label] = index;
    }
  }
  return c;
}

SmMessage map_bits(std::uint32_t word, const SystemConfig& config,
                   const Constellation& constellation) {
  SmMessage msg;
  const int sym_bits = config.symbol_bits();
  msg.antenna = static_cast<int>(word >> sym_bits);
  const std::uint32_t sym_label = word & ((1u << sym_bits) - 1u);
  msg.symbol = constellation.index_of_label(sym_label);
  msg.label = word;
  return msg;
}

SmMessage message_from_flat(int flat, const SystemConfig& config,
                            const Constellation& constellation) {
  SmMessage msg;
  msg.antenna = antenna_of(flat, config.qam_order);
  msg.symbol = symbol_of(flat, config.qam_order);
  msg.label = (static_cast<std::uint32_t>(msg.antenna)
               << config.symbol_bits()) |
              constellation.labels[msg.symbol];
  return msg;
}

std::uint32_t message_label(int flat, const SystemConfig& config,
                            const Constellation& constellation) {
  return message_from_flat(flat, config, constellation).label;
}

ChannelMatrix draw_channel(int num_rx, int num_tx, Stream& rng) {
  ChannelMatrix h(num_rx, num_tx);
  draw_channel_into(h, rng);
  return h;
}

void draw_channel_into(ChannelMatrix& channel, Stream& rng) {
  for (Eigen::Index t = 0; t < channel.cols(); ++t) {
    for (Eigen::Index r = 0; r < channel.rows(); ++r) {
      channel(r, t) = rng.cgauss(1.0);
    }
  }
}

void build_candidates_into(CandidateSet& out, const ChannelMatrix& channel,
                           const Constellation& constellation) {
  const int order = constellation.size();
  const int num_tx = static_cast<int>(channel.cols());
  out.qam_order = order;
  out.num_tx = num_tx;
  out.vectors.resize(channel.rows(), order * num_tx);
  for (int a = 0; a < num_tx; ++a) {
    for (int m = 0; m < order; ++m) {
      out.vectors.col(a * order + m) = channel.col(a) * constellation.points(m);
    }
  }
}

CandidateSet build_candidates(const ChannelMatrix& channel,
                              const Constellation& constellation) {
  CandidateSet set;
  build_candidates_into(set, channel, constellation);
  return set;
}

Eigen::VectorXcd simulate_transmission(const SmMessage& msg,
                                       const ChannelMatrix& channel,
                                       const Constellation& constellation,
                                       double noise_var, Stream& rng) {
  Eigen::VectorXcd y = channel.col(msg.antenna) * constellation.points(msg.symbol);
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    y(n) += rng.cgauss(noise_var);
  }
  return y;
}

Eigen::VectorXcd simulate_transmission(const CandidateSet& candidates,
                                       int flat, double noise_var,
                                       Stream& rng) {
  Eigen::VectorXcd y = candidates.vectors.col(flat);
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    y(n) += rng.cgauss(noise_var);
  }
  return y;
}

}  // namespace smrsd
