#ifndef SMRSD_MODEL_HPP
#define SMRSD_MODEL_HPP

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "smrsd/rng.hpp"

namespace smrsd {

using ChannelMatrix = Eigen::MatrixXcd;  // num_rx x num_tx, entries CN(0,1)

/// Squared magnitude of a complex value. All metric accumulation in the
/// library funnels through this helper so that different evaluation paths
/// produce bit-identical partial sums.
inline double abs2(std::complex<double> z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

struct SystemConfig {
  int qam_order = 4;      // constellation size, one of {4, 16, 64}
  int num_tx = 2;         // transmit antennas, power of two
  int num_rx = 2;         // receive antennas
  double snr_db = 0.0;    // average SNR rho in dB
  int psi_row = 1;        // maximum search depth, in [1, num_rx]
  int psi_col = 1;        // retained branches, in [1, qam_order*num_tx]
  std::uint64_t seed = 1;

  int hypotheses() const { return qam_order * num_tx; }
  int antenna_bits() const { return std::bit_width(
      static_cast<unsigned>(num_tx)) - 1; }
  int symbol_bits() const { return std::bit_width(
      static_cast<unsigned>(qam_order)) - 1; }
  int bits_per_message() const { return antenna_bits() + symbol_bits(); }

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
};

/// Linear noise variance for an average SNR in dB under the unit-energy
/// constellation convention: sigma_g^2 = 10^(-snr_db/10).
inline double snr_to_noise_var(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

/// Gray-labeled square QAM set with unit average energy.
struct Constellation {
  Eigen::VectorXcd points;            // point per symbol index
  std::vector<std::uint32_t> labels;  // Gray label per symbol index
  std::vector<int> label_to_index;    // inverse of labels
  int bits = 0;                       // label width = log2(size)

  int size() const { return static_cast<int>(points.size()); }
  int index_of_label(std::uint32_t label) const {
    return label_to_index[label];
  }
};

/// Square M-QAM, M in {4, 16, 64}: per-axis amplitude levels
/// {+-1, +-3, ...} scaled to unit average energy, labels formed as the
/// concatenation of per-axis Gray codes (I axis first).
Constellation build_qam(int order);

/// One transmit hypothesis: active antenna plus QAM symbol index. `label`
/// is the full message word, antenna bits (natural binary) ahead of the
/// symbol's Gray label.
struct SmMessage {
  int antenna = 0;
  int symbol = 0;
  std::uint32_t label = 0;
};

inline int flat_index(const SmMessage& msg, int qam_order) {
  return msg.antenna * qam_order + msg.symbol;
}
inline int antenna_of(int flat, int qam_order) { return flat / qam_order; }
inline int symbol_of(int flat, int qam_order) { return flat % qam_order; }

/// Splits a message word into antenna index (leading bits) and symbol
/// (trailing bits looked up by constellation label).
SmMessage map_bits(std::uint32_t word, const SystemConfig& config,
                   const Constellation& constellation);

/// Inverse of map_bits.
inline std::uint32_t message_word(const SmMessage& msg) { return msg.label; }

SmMessage message_from_flat(int flat, const SystemConfig& config,
                            const Constellation& constellation);

/// Full-label word for a flat hypothesis index.
std::uint32_t message_label(int flat, const SystemConfig& config,
                            const Constellation& constellation);

/// Number of differing bits between two full message labels.
inline int hamming_distance(const SmMessage& a, const SmMessage& b) {
  return std::popcount(a.label ^ b.label);
}

/// i.i.d. CN(0,1) channel matrix.
ChannelMatrix draw_channel(int num_rx, int num_tx, Stream& rng);

/// Fills a preallocated matrix, consuming the stream in the same order as
/// draw_channel (column-major).
void draw_channel_into(ChannelMatrix& channel, Stream& rng);

/// All qam_order * num_tx transmit hypotheses for one channel realization;
/// column j holds channel column antenna_of(j) scaled by the QAM point
/// symbol_of(j).
struct CandidateSet {
  Eigen::MatrixXcd vectors;  // num_rx x hypotheses
  int qam_order = 0;
  int num_tx = 0;

  int count() const { return static_cast<int>(vectors.cols()); }
  int num_rx() const { return static_cast<int>(vectors.rows()); }
};

CandidateSet build_candidates(const ChannelMatrix& channel,
                              const Constellation& constellation);
void build_candidates_into(CandidateSet& out, const ChannelMatrix& channel,
                           const Constellation& constellation);

/// y = h_antenna * s_symbol + g with g ~ CN(0, noise_var) per entry.
/// noise_var = 0 yields the noiseless candidate vector exactly.
Eigen::VectorXcd simulate_transmission(const SmMessage& msg,
                                       const ChannelMatrix& channel,
                                       const Constellation& constellation,
                                       double noise_var, Stream& rng);

/// Same, drawing the transmit vector from a prebuilt candidate set.
Eigen::VectorXcd simulate_transmission(const CandidateSet& candidates,
                                       int flat, double noise_var,
                                       Stream& rng);

}  // namespace smrsd

#endif  // SMRSD_MODEL_HPP
