#include "eegshift/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace eegshift {

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

std::size_t Tree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.is_leaf()) continue;
    d[static_cast<std::size_t>(n.left)] = d[i] + 1;
    d[static_cast<std::size_t>(n.right)] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

SortedColumns::SortedColumns(const Matrix& X) : order_(X.cols()) {
  const std::size_t n = X.rows();
  for (std::size_t f = 0; f < X.cols(); ++f) {
    auto& ord = order_[f];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), 0u);
    std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      const double va = X(a, f), vb = X(b, f);
      return va < vb || (va == vb && a < b);
    });
  }
}

namespace {

// Sufficient statistics; the meaning of a/b/c depends on the criterion.
struct Stats {
  double count = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Stats operator-(const Stats& o) const { return {count - o.count, a - o.a, b - o.b, c - o.c}; }
};

class Criterion {
 public:
  Criterion(SplitCriterion kind, const GrowInput& in) : kind_(kind), in_(in) {}

  void add(Stats& s, std::size_t i, double mult) const {
    s.count += mult;
    const double w = in_.weight.empty() ? mult : mult * in_.weight[i];
    switch (kind_) {
      case SplitCriterion::Gini:
        (in_.target[i] > 0.5 ? s.b : s.a) += w;
        break;
      case SplitCriterion::Squared: {
        const double t = in_.target[i];
        s.a += w;
        s.b += w * t;
        s.c += w * t * t;
        break;
      }
      case SplitCriterion::Newton:
        s.a += mult * in_.target[i];
        s.b += mult * in_.hessian[i];
        break;
    }
  }

  double score(const Stats& s) const {
    switch (kind_) {
      case SplitCriterion::Gini: {
        const double w = s.a + s.b;
        return w > 0.0 ? (s.a * s.a + s.b * s.b) / w : 0.0;
      }
      case SplitCriterion::Squared:
        return s.a > 0.0 ? s.b * s.b / s.a : 0.0;
      case SplitCriterion::Newton:
        return s.a * s.a / (s.b + in_.lambda);
    }
    return 0.0;
  }

  double gain(const Stats& left, const Stats& right, const Stats& parent) const {
    const double g = score(left) + score(right) - score(parent);
    return kind_ == SplitCriterion::Newton ? 0.5 * g - in_.gamma : g;
  }

  // Whether a directly impure node is worth searching at all.
  bool splittable(const Stats& s) const {
    switch (kind_) {
      case SplitCriterion::Gini:
        return s.a > 0.0 && s.b > 0.0;
      case SplitCriterion::Squared: {
        if (!(s.a > 0.0)) return false;
        const double sse = s.c - s.b * s.b / s.a;
        return sse > 1e-12 * std::max(1.0, std::fabs(s.c));
      }
      case SplitCriterion::Newton:
        return true;
    }
    return false;
  }

  bool accept(double best_gain) const {
    if (kind_ == SplitCriterion::Newton) return best_gain > 1e-12;
    return best_gain > -std::numeric_limits<double>::infinity();
  }

  double leaf_value(const Stats& s) const {
    switch (kind_) {
      case SplitCriterion::Gini: {
        const double w = s.a + s.b;
        return w > 0.0 ? s.b / w : 0.0;
      }
      case SplitCriterion::Squared:
        return s.a > 0.0 ? s.b / s.a : 0.0;
      case SplitCriterion::Newton:
        return (s.b + in_.lambda) > 0.0 ? -s.a / (s.b + in_.lambda) : 0.0;
    }
    return 0.0;
  }

 private:
  SplitCriterion kind_;
  const GrowInput& in_;
};

struct Best {
  double gain = -std::numeric_limits<double>::infinity();
  std::int32_t feature = -1;
  double threshold = 0.0;
};

double midpoint(double lo, double hi) {
  const double t = lo + (hi - lo) / 2.0;
  return t < hi ? t : lo;
}

}  // namespace

GrownTree grow_tree(SplitCriterion kind, const GrowInput& in, const GrowParams& params, Rng* rng) {
  if (in.X == nullptr || in.sorted == nullptr) throw std::invalid_argument("grow_tree needs a matrix and its sorted columns");
  const Matrix& X = *in.X;
  const std::size_t n = X.rows();
  const std::size_t F = X.cols();
  if (in.target.size() != n) throw std::invalid_argument("grow_tree target length mismatch");
  if (kind == SplitCriterion::Newton && in.hessian.size() != n) throw std::invalid_argument("grow_tree hessian length mismatch");
  if (params.max_features > 0 && params.max_features < F && rng == nullptr) {
    throw std::invalid_argument("feature subsampling needs a random stream");
  }
  const Criterion crit(kind, in);
  auto mult = [&](std::size_t i) { return in.multiplicity.empty() ? 1.0 : in.multiplicity[i]; };

  std::vector<TreeNode> nodes(1);
  std::vector<Stats> node_stats(1);
  std::vector<std::int32_t> node_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mult(i);
    if (m > 0.0) {
      node_of[i] = 0;
      crit.add(node_stats[0], i, m);
    }
  }

  std::vector<std::int32_t> frontier{0};
  const std::size_t k_features = (params.max_features == 0 || params.max_features >= F) ? F : params.max_features;
  std::vector<std::size_t> feature_pool(F);

  for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
    // Slots index the frontier nodes that may split at this level.
    std::vector<std::int32_t> slot_of(nodes.size(), -1);
    std::vector<std::int32_t> slots;
    for (std::int32_t id : frontier) {
      const Stats& s = node_stats[static_cast<std::size_t>(id)];
      if (s.count >= 2.0 * params.min_leaf && crit.splittable(s)) {
        slot_of[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(slots.size());
        slots.push_back(id);
      }
    }
    if (slots.empty()) break;

    std::vector<char> candidate(slots.size() * F, k_features == F ? 1 : 0);
    if (k_features < F) {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
        for (std::size_t k = 0; k < k_features; ++k) {
          const std::size_t j = k + static_cast<std::size_t>(rng->below(F - k));
          std::swap(feature_pool[k], feature_pool[j]);
          candidate[s * F + feature_pool[k]] = 1;
        }
      }
    }

    std::vector<Best> best(slots.size());
    std::vector<Stats> running(slots.size());
    std::vector<double> last(slots.size());
    std::vector<char> seen(slots.size());
    for (std::size_t f = 0; f < F; ++f) {
      std::fill(running.begin(), running.end(), Stats{});
      std::fill(seen.begin(), seen.end(), 0);
      for (std::uint32_t row : in.sorted->order(f)) {
        const std::int32_t node = node_of[row];
        if (node < 0) continue;
        const std::int32_t slot = slot_of[static_cast<std::size_t>(node)];
        if (slot < 0) continue;
        const auto s = static_cast<std::size_t>(slot);
        if (!candidate[s * F + f]) continue;
        const double v = X(row, f);
        if (seen[s] && v > last[s]) {
          const Stats& total = node_stats[static_cast<std::size_t>(node)];
          const Stats& left = running[s];
          const Stats right = total - left;
          if (left.count >= params.min_leaf && right.count >= params.min_leaf) {
            const double g = crit.gain(left, right, total);
            if (g > best[s].gain) best[s] = {g, static_cast<std::int32_t>(f), midpoint(last[s], v)};
          }
        }
        crit.add(running[s], row, mult(row));
        last[s] = v;
        seen[s] = 1;
      }
    }

    std::vector<std::int32_t> next;
    std::vector<std::int32_t> left_child(slots.size(), -1);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (best[s].feature < 0 || !crit.accept(best[s].gain)) continue;
      const auto id = static_cast<std::size_t>(slots[s]);
      const auto l = static_cast<std::int32_t>(nodes.size());
      nodes[id].feature = best[s].feature;
      nodes[id].threshold = best[s].threshold;
      nodes[id].left = l;
      nodes[id].right = l + 1;
      nodes.emplace_back();
      nodes.emplace_back();
      node_stats.emplace_back();
      node_stats.emplace_back();
      left_child[s] = l;
      next.push_back(l);
      next.push_back(l + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t node = node_of[i];
      if (node < 0 || static_cast<std::size_t>(node) >= slot_of.size()) continue;
      const std::int32_t slot = slot_of[static_cast<std::size_t>(node)];
      if (slot < 0 || left_child[static_cast<std::size_t>(slot)] < 0) continue;
      const TreeNode& parent = nodes[static_cast<std::size_t>(node)];
      const std::int32_t child = X(i, static_cast<std::size_t>(parent.feature)) <= parent.threshold ? parent.left : parent.right;
      node_of[i] = child;
      crit.add(node_stats[static_cast<std::size_t>(child)], i, mult(i));
    }
    frontier = std::move(next);
  }

  for (std::size_t id = 0; id < nodes.size(); ++id) {
    if (nodes[id].is_leaf()) nodes[id].value = crit.leaf_value(node_stats[id]);
  }
  return {Tree(std::move(nodes)), std::move(node_of)};
}

}  // namespace eegshift
