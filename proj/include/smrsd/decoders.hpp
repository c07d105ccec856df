#ifndef SMRSD_DECODERS_HPP
#define SMRSD_DECODERS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "smrsd/model.hpp"

namespace smrsd {

/// Partial squared Euclidean distance over the first `depth` receive
/// dimensions. At depth == num_rx this is the full ML metric.
template <typename DerivedY, typename DerivedX>
double level_metric(const Eigen::MatrixBase<DerivedY>& received,
                    const Eigen::MatrixBase<DerivedX>& candidate,
                    Eigen::Index depth) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < depth; ++n) {
    sum += abs2(std::complex<double>(received(n)) -
                std::complex<double>(candidate(n)));
  }
  return sum;
}

struct DecodeOutcome {
  int estimated_index = -1;
  std::int64_t visited_paper = 0;  // psi_col-baseline node count
  std::int64_t visited_total = 0;  // adds the discarded level-1 nodes
  bool hit_iteration_cap = false;  // diagnostic; never set in normal runs
};

/// Exhaustive minimum of the full metric over every hypothesis. Ties go to
/// the lowest flat index. Both visit counters equal hypotheses * num_rx.
DecodeOutcome ml_decode(const Eigen::VectorXcd& received,
                        const CandidateSet& candidates);

/// Indices of the `keep` smallest entries of `level1`, ties broken by
/// lowest index; returned in ascending index order.
std::vector<int> select_kept_branches(const Eigen::VectorXd& level1, int keep);

/// Reusable per-call search state: retained branch set, per-branch depth
/// and frontier metric, and the best-first frontier heap.
struct RsdWorkspace {
  Eigen::VectorXd level1;
  std::vector<int> kept;
  std::vector<int> depth;
  std::vector<double> metric;
  std::vector<std::pair<double, int>> frontier;  // (metric, flat index) heap
};

/// Best-first search over the reduced tree: all level-1 metrics, keep the
/// psi_col smallest, then repeatedly extend the minimum-metric retained
/// branch one level until that minimum sits at depth psi_row.
///
/// visited_paper counts the retained level-1 nodes plus one per extension;
/// visited_total adds the (hypotheses - psi_col) level-1 nodes that were
/// computed and discarded by the screening step.
DecodeOutcome rsd_decode(const Eigen::VectorXcd& received,
                         const CandidateSet& candidates, int psi_row,
                         int psi_col, RsdWorkspace* workspace = nullptr);

/// Screening step identical to rsd_decode, then an exhaustive depth
/// psi_row metric evaluation over the retained set. Reference oracle for
/// the best-first search; returns the estimated flat index.
int reduced_exhaustive_decode(const Eigen::VectorXcd& received,
                              const CandidateSet& candidates, int psi_row,
                              int psi_col);

}  // namespace smrsd

#endif  // SMRSD_DECODERS_HPP
