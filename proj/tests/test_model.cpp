#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "smrsd/model.hpp"

using namespace smrsd;

namespace {

SystemConfig make_config(int order, int tx, int rx) {
  SystemConfig cfg;
  cfg.qam_order = order;
  cfg.num_tx = tx;
  cfg.num_rx = rx;
  cfg.psi_row = rx;
  cfg.psi_col = order * tx;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("snr_to_noise_var") {
  CHECK(snr_to_noise_var(0.0) == doctest::Approx(1.0));
  CHECK(snr_to_noise_var(10.0) == doctest::Approx(0.1));
  CHECK(snr_to_noise_var(3.0) ==
        doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
}

TEST_CASE("QPSK points sit on the unit circle") {
  const Constellation qpsk = build_qam(4);
  REQUIRE(qpsk.size() == 4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < 4; ++m) {
    CHECK(std::abs(qpsk.points(m).real()) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(qpsk.points(m).imag()) == doctest::Approx(inv_sqrt2));
    CHECK(abs2(qpsk.points(m)) == doctest::Approx(1.0));
  }
}

TEST_CASE("16-QAM energies and normalization") {
  const Constellation qam = build_qam(16);
  // Corner point (3+3i)/sqrt(10).
  double max_energy = 0.0;
  std::map<double, int> multiplicity;
  for (int m = 0; m < 16; ++m) {
    const double e = abs2(qam.points(m));
    max_energy = std::max(max_energy, e);
    bool found = false;
    for (auto& [k, v] : multiplicity) {
      if (std::abs(k - e) < 1e-12) {
        ++v;
        found = true;
        break;
      }
    }
    if (!found) multiplicity[e] = 1;
  }
  CHECK(max_energy == doctest::Approx(1.8).epsilon(1e-12));
  REQUIRE(multiplicity.size() == 3);
  std::vector<int> counts;
  for (const auto& [k, v] : multiplicity) counts.push_back(v);
  CHECK(counts == std::vector<int>{4, 8, 4});
}

TEST_CASE("unit average energy for every supported order") {
  for (const int order : {4, 16, 64}) {
    const Constellation c = build_qam(order);
    double sum = 0.0;
    for (int m = 0; m < order; ++m) sum += abs2(c.points(m));
    CHECK(sum / order == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("labels are distinct and axis neighbors differ in one bit") {
  for (const int order : {4, 16, 64}) {
    const Constellation c = build_qam(order);
    std::set<std::uint32_t> seen(c.labels.begin(), c.labels.end());
    CHECK(seen.size() == static_cast<std::size_t>(order));

    const int per_axis = static_cast<int>(std::lround(std::sqrt(order)));
    for (int i = 0; i < per_axis; ++i) {
      for (int q = 0; q < per_axis; ++q) {
        const std::uint32_t lab = c.labels[i * per_axis + q];
        if (i + 1 < per_axis) {
          const std::uint32_t right = c.labels[(i + 1) * per_axis + q];
          CHECK(std::popcount(lab ^ right) == 1);
        }
        if (q + 1 < per_axis) {
          const std::uint32_t up = c.labels[i * per_axis + q + 1];
          CHECK(std::popcount(lab ^ up) == 1);
        }
      }
    }
  }
}

TEST_CASE("build_qam rejects unsupported orders") {
  CHECK_THROWS_AS(build_qam(2), std::invalid_argument);
  CHECK_THROWS_AS(build_qam(32), std::invalid_argument);
}

TEST_CASE("map_bits splits antenna and symbol fields") {
  const SystemConfig cfg = make_config(4, 4, 4);
  const Constellation c = build_qam(4);

  const SmMessage zero = map_bits(0b0000, cfg, c);
  CHECK(zero.antenna == 0);
  CHECK(c.labels[zero.symbol] == 0u);

  const SmMessage msg = map_bits(0b1101, cfg, c);
  CHECK(msg.antenna == 3);
  CHECK(c.labels[msg.symbol] == 0b01u);
}

TEST_CASE("bit mapping round-trips over every word") {
  for (const auto& [order, tx] : std::vector<std::pair<int, int>>{
           {4, 4}, {16, 2}, {16, 8}}) {
    const SystemConfig cfg = make_config(order, tx, 2);
    const Constellation c = build_qam(order);
    std::set<int> flats;
    for (std::uint32_t word = 0;
         word < (1u << cfg.bits_per_message()); ++word) {
      const SmMessage msg = map_bits(word, cfg, c);
      CHECK(message_word(msg) == word);
      const int flat = flat_index(msg, order);
      flats.insert(flat);
      const SmMessage back = message_from_flat(flat, cfg, c);
      CHECK(back.label == msg.label);
      CHECK(back.antenna == msg.antenna);
      CHECK(back.symbol == msg.symbol);
    }
    CHECK(flats.size() == static_cast<std::size_t>(cfg.hypotheses()));
  }
}

TEST_CASE("hamming_distance equals popcount of label XOR") {
  const SystemConfig cfg = make_config(16, 4, 2);
  const Constellation c = build_qam(16);
  SmMessage a, b;
  a.label = 0b000000;
  b.label = 0b111111;
  CHECK(hamming_distance(a, a) == 0);
  CHECK(hamming_distance(a, b) == 6);

  Stream rng = Stream::derive(3, StreamKind::Generic, 0, 0);
  for (int t = 0; t < 1000; ++t) {
    const SmMessage x =
        map_bits(rng.bits(cfg.bits_per_message()), cfg, c);
    const SmMessage y =
        map_bits(rng.bits(cfg.bits_per_message()), cfg, c);
    CHECK(hamming_distance(x, y) == std::popcount(x.label ^ y.label));
    CHECK(hamming_distance(x, y) == hamming_distance(y, x));
  }
}

TEST_CASE("channel entries have unit variance and zero mean") {
  Stream rng = Stream::derive(11, StreamKind::Generic, 1, 0);
  const int draws = 4000;
  double sum_re = 0.0, sum_abs2 = 0.0;
  std::int64_t n = 0;
  for (int d = 0; d < draws; ++d) {
    const ChannelMatrix h = draw_channel(4, 4, rng);
    for (int t = 0; t < 4; ++t) {
      for (int r = 0; r < 4; ++r) {
        sum_re += h(r, t).real();
        sum_abs2 += abs2(h(r, t));
        ++n;
      }
    }
  }
  const double mean_re = sum_re / n;
  const double var = sum_abs2 / n;
  CHECK(std::abs(mean_re) < 0.02);  // ~5 sigma for 64k samples
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("candidate vectors equal channel column times symbol exactly") {
  const Constellation c = build_qam(16);
  Stream rng = Stream::derive(5, StreamKind::Generic, 0, 0);
  const ChannelMatrix h = draw_channel(6, 4, rng);
  const CandidateSet cands = build_candidates(h, c);
  REQUIRE(cands.count() == 64);
  for (int j = 0; j < cands.count(); ++j) {
    const int a = antenna_of(j, 16);
    const int m = symbol_of(j, 16);
    for (int n = 0; n < 6; ++n) {
      const std::complex<double> want = h(n, a) * c.points(m);
      CHECK(cands.vectors(n, j) == want);  // bit-identical construction
    }
  }
}

TEST_CASE("noiseless transmission reproduces the candidate column") {
  const SystemConfig cfg = make_config(4, 2, 3);
  const Constellation c = build_qam(4);
  Stream rng = Stream::derive(21, StreamKind::Generic, 0, 0);
  const ChannelMatrix h = draw_channel(3, 2, rng);
  const CandidateSet cands = build_candidates(h, c);

  const SmMessage msg = message_from_flat(5, cfg, c);
  Stream noise = Stream::derive(21, StreamKind::Generic, 1, 0);
  const Eigen::VectorXcd y = simulate_transmission(msg, h, c, 0.0, noise);
  for (int n = 0; n < 3; ++n) {
    CHECK(y(n) == cands.vectors(n, 5));
  }
}

TEST_CASE("noise power matches num_rx times the variance") {
  const Constellation c = build_qam(4);
  Stream rng = Stream::derive(31, StreamKind::Generic, 0, 0);
  const ChannelMatrix h = draw_channel(4, 2, rng);
  const CandidateSet cands = build_candidates(h, c);
  const double noise_var = 0.37;

  const int trials = 100000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Stream noise = Stream::derive(31, StreamKind::Generic, 2,
                                  static_cast<std::uint64_t>(t));
    const Eigen::VectorXcd y =
        simulate_transmission(cands, 3, noise_var, noise);
    sum += (y - cands.vectors.col(3)).squaredNorm();
  }
  const double mean = sum / trials;
  const double expected = 4 * noise_var;
  // ||g||^2 over 4 complex dims has variance num_rx * noise_var^2.
  const double se =
      std::sqrt(4 * noise_var * noise_var / static_cast<double>(trials));
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("identical stream parameters give bit-identical transmissions") {
  const Constellation c = build_qam(16);
  Stream h_rng = Stream::derive(77, StreamKind::Generic, 0, 0);
  const ChannelMatrix h = draw_channel(8, 8, h_rng);
  const CandidateSet cands = build_candidates(h, c);

  Stream s1 = Stream::derive(77, StreamKind::SimTrial, 4, 1234);
  Stream s2 = Stream::derive(77, StreamKind::SimTrial, 4, 1234);
  const Eigen::VectorXcd y1 = simulate_transmission(cands, 17, 0.5, s1);
  const Eigen::VectorXcd y2 = simulate_transmission(cands, 17, 0.5, s2);
  for (int n = 0; n < 8; ++n) {
    CHECK(y1(n).real() == y2(n).real());
    CHECK(y1(n).imag() == y2(n).imag());
  }
}

TEST_CASE("config validation catches out-of-range parameters") {
  SystemConfig cfg = make_config(16, 8, 8);
  CHECK_NOTHROW(cfg.validate());
  cfg.psi_col = 129;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = make_config(16, 8, 8);
  cfg.psi_row = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = make_config(16, 3, 8);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = make_config(8, 4, 4);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
