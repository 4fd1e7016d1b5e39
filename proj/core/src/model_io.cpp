#include <stdexcept>

#include "eegshift/binary_io.hpp"
#include "eegshift/models.hpp"

namespace eegshift {

namespace {

constexpr char kModelMagic[4] = {'E', 'E', 'G', 'M'};
constexpr std::uint16_t kModelVersion = 1;

void put_vec(ByteWriter& w, const std::vector<double>& v) {
  w.u64(v.size());
  for (double x : v) w.f64(x);
}

std::vector<double> get_vec(ByteReader& r) {
  const std::uint64_t n = r.u64();
  if (n > r.remaining() / 8) throw TruncatedInput("vector length exceeds blob");
  std::vector<double> v(n);
  for (double& x : v) x = r.f64();
  return v;
}

void put_tree(ByteWriter& w, const Tree& t) {
  w.u64(t.nodes().size());
  for (const TreeNode& n : t.nodes()) {
    w.u32(static_cast<std::uint32_t>(n.feature));
    w.f64(n.threshold);
    w.u32(static_cast<std::uint32_t>(n.left));
    w.u32(static_cast<std::uint32_t>(n.right));
    w.f64(n.value);
  }
}

Tree get_tree(ByteReader& r, std::size_t n_features) {
  const std::uint64_t count = r.u64();
  if (count == 0 || count > r.remaining() / 28) throw std::invalid_argument("bad tree node count in model blob");
  std::vector<TreeNode> nodes(count);
  for (TreeNode& n : nodes) {
    n.feature = static_cast<std::int32_t>(r.u32());
    n.threshold = r.f64();
    n.left = static_cast<std::int32_t>(r.u32());
    n.right = static_cast<std::int32_t>(r.u32());
    n.value = r.f64();
  }
  // Children must point forward so traversal always terminates.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) continue;
    const auto ok = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && static_cast<std::uint64_t>(c) < count; };
    if (static_cast<std::size_t>(n.feature) >= n_features || !ok(n.left) || !ok(n.right)) {
      throw std::invalid_argument("corrupt tree in model blob");
    }
  }
  return Tree(std::move(nodes));
}

void put_trees(ByteWriter& w, const std::vector<Tree>& ts) {
  w.u64(ts.size());
  for (const Tree& t : ts) put_tree(w, t);
}

std::vector<Tree> get_trees(ByteReader& r, std::size_t n_features) {
  const std::uint64_t n = r.u64();
  if (n > r.remaining()) throw TruncatedInput("tree count exceeds blob");
  std::vector<Tree> ts;
  ts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) ts.push_back(get_tree(r, n_features));
  return ts;
}

void put_standardizer(ByteWriter& w, const Standardizer& s) {
  put_vec(w, s.mean);
  put_vec(w, s.scale);
}

Standardizer get_standardizer(ByteReader& r) {
  Standardizer s;
  s.mean = get_vec(r);
  s.scale = get_vec(r);
  return s;
}

struct Writer {
  ByteWriter& w;
  void operator()(const TreeModel& m) const { put_tree(w, m.tree); }
  void operator()(const ForestModel& m) const { put_trees(w, m.trees); }
  void operator()(const BoostModel& m) const {
    w.f64(m.base_score);
    w.f64(m.learning_rate);
    put_trees(w, m.trees);
  }
  void operator()(const AdaModel& m) const {
    put_trees(w, m.stumps);
    put_vec(w, m.alphas);
  }
  void operator()(const NbModel& m) const {
    for (std::size_t k = 0; k < 2; ++k) {
      w.f64(m.log_prior[k]);
      put_vec(w, m.mean[k]);
      put_vec(w, m.var[k]);
    }
  }
  void operator()(const LinearModel& m) const {
    put_standardizer(w, m.standardizer);
    put_vec(w, m.w);
    w.f64(m.b);
  }
  void operator()(const KernelModel& m) const {
    put_standardizer(w, m.standardizer);
    w.f64(m.gamma);
    w.u64(m.support.rows());
    w.u64(m.support.cols());
    for (double v : m.support.data()) w.f64(v);
    put_vec(w, m.coef);
    w.f64(m.rho);
  }
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const TrainedModel& model) {
  ByteWriter w;
  w.raw(std::string_view(kModelMagic, 4));
  w.u16(kModelVersion);
  w.u8(static_cast<std::uint8_t>(model.kind));
  w.u64(model.seed);
  w.f64(model.train_seconds);
  w.u8(model.converged ? 1 : 0);
  w.u64(model.n_features);
  std::visit(Writer{w}, model.params);
  return w.release();
}

TrainedModel deserialize_model(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  TrainedModel m;
  try {
    if (r.remaining() < 4 || r.raw(4) != std::string_view(kModelMagic, 4)) throw std::invalid_argument("not a model blob");
    if (r.u16() != kModelVersion) throw std::invalid_argument("unsupported model blob version");
    const std::uint8_t kind = r.u8();
    if (kind > 7) throw std::invalid_argument("unknown model kind in blob");
    m.kind = static_cast<ModelKind>(kind);
    m.seed = r.u64();
    m.train_seconds = r.f64();
    m.converged = r.u8() != 0;
    m.n_features = r.u64();
    const std::size_t F = m.n_features;
    switch (m.kind) {
      case ModelKind::DecisionTree:
        m.params = TreeModel{get_tree(r, F)};
        break;
      case ModelKind::RandomForest:
        m.params = ForestModel{get_trees(r, F)};
        break;
      case ModelKind::GradientBoost:
      case ModelKind::XGBoostStyle: {
        BoostModel b;
        b.base_score = r.f64();
        b.learning_rate = r.f64();
        b.trees = get_trees(r, F);
        m.params = std::move(b);
        break;
      }
      case ModelKind::AdaBoost: {
        AdaModel a;
        a.stumps = get_trees(r, F);
        a.alphas = get_vec(r);
        if (a.alphas.size() != a.stumps.size()) throw std::invalid_argument("AdaBoost blob: alpha count mismatch");
        m.params = std::move(a);
        break;
      }
      case ModelKind::GaussianNB: {
        NbModel nb;
        for (std::size_t k = 0; k < 2; ++k) {
          nb.log_prior[k] = r.f64();
          nb.mean[k] = get_vec(r);
          nb.var[k] = get_vec(r);
        }
        m.params = std::move(nb);
        break;
      }
      case ModelKind::LinearSVC: {
        LinearModel lin;
        lin.standardizer = get_standardizer(r);
        lin.w = get_vec(r);
        lin.b = r.f64();
        if (lin.w.size() != F) throw std::invalid_argument("LinearSVC blob: weight length mismatch");
        m.params = std::move(lin);
        break;
      }
      case ModelKind::RbfSVC: {
        KernelModel km;
        km.standardizer = get_standardizer(r);
        km.gamma = r.f64();
        const std::uint64_t rows = r.u64(), cols = r.u64();
        if (cols != F || (cols > 0 && rows > r.remaining() / (8 * cols))) throw std::invalid_argument("RBF blob: bad support shape");
        km.support = Matrix(rows, cols);
        for (double& v : km.support.data()) v = r.f64();
        km.coef = get_vec(r);
        km.rho = r.f64();
        if (km.coef.size() != rows) throw std::invalid_argument("RBF blob: coefficient count mismatch");
        m.params = std::move(km);
        break;
      }
    }
  } catch (const TruncatedInput& e) {
    throw std::invalid_argument(std::string("truncated model blob: ") + e.what());
  }
  if (r.remaining() != 0) throw std::invalid_argument("trailing bytes after model blob");
  return m;
}

}  // namespace eegshift
