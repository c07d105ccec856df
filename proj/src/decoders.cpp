#include "smrsd/decoders.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace smrsd {

namespace {

void compute_level1(const Eigen::VectorXcd& received,
                    const CandidateSet& candidates, Eigen::VectorXd& out) {
  const int count = candidates.count();
  out.resize(count);
  const std::complex<double> y0 = received(0);
  for (int j = 0; j < count; ++j) {
    out(j) = abs2(y0 - candidates.vectors(0, j));
  }
}

// Min-heap order on (metric, flat index).
struct FrontierLess {
  bool operator()(const std::pair<double, int>& a,
                  const std::pair<double, int>& b) const {
    return a > b;  // std::push_heap builds a max-heap; invert
  }
};

}  // namespace

DecodeOutcome ml_decode(const Eigen::VectorXcd& received,
                        const CandidateSet& candidates) {
  const int count = candidates.count();
  const Eigen::Index depth = received.size();
  DecodeOutcome out;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < count; ++j) {
    const double metric = level_metric(received, candidates.vectors.col(j),
                                       depth);
    if (metric < best) {
      best = metric;
      out.estimated_index = j;
    }
  }
  out.visited_paper = static_cast<std::int64_t>(count) * depth;
  out.visited_total = out.visited_paper;
  return out;
}

std::vector<int> select_kept_branches(const Eigen::VectorXd& level1,
                                      int keep) {
  const int count = static_cast<int>(level1.size());
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  const auto by_metric_then_index = [&level1](int a, int b) {
    if (level1(a) != level1(b)) return level1(a) < level1(b);
    return a < b;
  };
  if (keep < count) {
    std::nth_element(order.begin(), order.begin() + keep - 1, order.end(),
                     by_metric_then_index);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

DecodeOutcome rsd_decode(const Eigen::VectorXcd& received,
                         const CandidateSet& candidates, int psi_row,
                         int psi_col, RsdWorkspace* workspace) {
  const int count = candidates.count();
  const int num_rx = static_cast<int>(received.size());
  if (psi_row < 1 || psi_row > num_rx) {
    throw std::invalid_argument("rsd_decode: psi_row outside [1, num_rx]");
  }
  if (psi_col < 1 || psi_col > count) {
    throw std::invalid_argument("rsd_decode: psi_col outside [1, hypotheses]");
  }

  RsdWorkspace local;
  RsdWorkspace& ws = workspace != nullptr ? *workspace : local;

  compute_level1(received, candidates, ws.level1);
  ws.kept = select_kept_branches(ws.level1, psi_col);

  ws.depth.assign(psi_col, 1);
  ws.metric.resize(psi_col);
  ws.frontier.clear();
  ws.frontier.reserve(psi_col);

  // The heap stores (metric, flat index); slots index the depth/metric
  // arrays. Entries are unique per branch: pop, extend, push back.
  std::vector<std::pair<double, int>>& heap = ws.frontier;
  for (int s = 0; s < psi_col; ++s) {
    ws.metric[s] = ws.level1(ws.kept[s]);
    heap.emplace_back(ws.metric[s], ws.kept[s]);
  }
  // kept is ascending, so the branch slot of a flat index is recovered by
  // binary search.
  const auto slot_of_flat = [&ws](int flat) {
    return static_cast<int>(
        std::lower_bound(ws.kept.begin(), ws.kept.end(), flat) -
        ws.kept.begin());
  };

  std::make_heap(heap.begin(), heap.end(), FrontierLess{});

  DecodeOutcome out;
  const std::int64_t cap =
      static_cast<std::int64_t>(psi_row) * static_cast<std::int64_t>(psi_col);
  std::int64_t expansions = 0;
  int decided = -1;

  while (true) {
    const auto [metric, flat] = heap.front();
    const int slot = slot_of_flat(flat);
    if (ws.depth[slot] == psi_row) {
      decided = flat;
      break;
    }
    if (expansions >= cap) {
      out.hit_iteration_cap = true;
      decided = flat;  // minimum frontier metric, ties by lowest index
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), FrontierLess{});
    const int d = ws.depth[slot];
    ws.metric[slot] += abs2(received(d) - candidates.vectors(d, flat));
    ws.depth[slot] = d + 1;
    ++expansions;
    heap.back() = {ws.metric[slot], flat};
    std::push_heap(heap.begin(), heap.end(), FrontierLess{});
  }

  out.estimated_index = decided;
  out.visited_paper = psi_col + expansions;
  out.visited_total = out.visited_paper + (count - psi_col);
  return out;
}

int reduced_exhaustive_decode(const Eigen::VectorXcd& received,
                              const CandidateSet& candidates, int psi_row,
                              int psi_col) {
  const int count = candidates.count();
  const int num_rx = static_cast<int>(received.size());
  if (psi_row < 1 || psi_row > num_rx) {
    throw std::invalid_argument(
        "reduced_exhaustive_decode: psi_row outside [1, num_rx]");
  }
  if (psi_col < 1 || psi_col > count) {
    throw std::invalid_argument(
        "reduced_exhaustive_decode: psi_col outside [1, hypotheses]");
  }
  Eigen::VectorXd level1;
  compute_level1(received, candidates, level1);
  const std::vector<int> kept = select_kept_branches(level1, psi_col);

  int best_index = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const int j : kept) {
    const double metric =
        level_metric(received, candidates.vectors.col(j), psi_row);
    if (metric < best) {  // kept is ascending: ties keep the lowest index
      best = metric;
      best_index = j;
    }
  }
  return best_index;
}

}  // namespace smrsd
