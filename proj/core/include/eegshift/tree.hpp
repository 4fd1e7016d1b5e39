#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eegshift/matrix.hpp"
#include "eegshift/rng.hpp"

namespace eegshift {

/// Internal nodes route x[feature] <= threshold to `left`. Leaves have feature == -1.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::vector<TreeNode>& nodes() noexcept { return nodes_; }

  std::size_t leaf_index(std::span<const double> x) const;
  double value(std::span<const double> x) const { return nodes_[leaf_index(x)].value; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Per-feature row order sorted by (value, row). Built once per training matrix
/// and shared by every tree grown on it.
class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& X);
  std::span<const std::uint32_t> order(std::size_t feature) const { return order_[feature]; }
  std::size_t features() const noexcept { return order_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> order_;
};

struct GrowParams {
  int max_depth = 8;
  /// Minimum multiplicity-weighted sample count per child.
  double min_leaf = 2.0;
  /// Candidate features per split; 0 means all.
  std::size_t max_features = 0;
};

/// Which impurity / gain a tree is grown with.
enum class SplitCriterion {
  Gini,        // classification on labels in {0,1} with sample weights; leaf = P(y = 1)
  Squared,     // least squares on real targets; leaf = weighted mean
  Newton,      // second order: gradients/hessians with L2 leaf penalty; leaf = -G / (H + lambda)
};

struct GrowInput {
  const Matrix* X = nullptr;
  const SortedColumns* sorted = nullptr;
  /// Row multiplicity (bootstrap counts); 0 excludes the row. Empty = all ones.
  std::span<const double> multiplicity;
  /// Per-row weight for Gini / Squared. Empty = all ones.
  std::span<const double> weight;
  /// Gini: labels (0/1). Squared: targets. Newton: gradients.
  std::span<const double> target;
  /// Newton only.
  std::span<const double> hessian;
  double lambda = 0.0;
  double gamma = 0.0;
};

struct GrownTree {
  Tree tree;
  /// Leaf node id for each training row; -1 for rows with multiplicity 0.
  std::vector<std::int32_t> leaf_of;
};

/// Level-wise exact greedy growth over presorted columns. Thresholds are midpoints of
/// adjacent distinct values; ties go to the lowest feature, then the lowest threshold.
GrownTree grow_tree(SplitCriterion criterion, const GrowInput& input, const GrowParams& params, Rng* rng = nullptr);

}  // namespace eegshift
