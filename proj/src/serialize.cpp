// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Model file layout (all integers little-endian):
//
//   "SHSMODEL"  u32 version  u32 algorithm  u64 seed
//   block hyperparameters
//   block scaler (15 lo followed by 15 hi)
//   f64 train accuracy
//   payload (algorithm specific, see write_payload)
//
// A block is a u64 element count followed by that many f64 values.

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "shs/models.hpp"

namespace shs {

namespace {

constexpr char kMagic[8] = {'S', 'H', 'S', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kNodeWidth = 5 + kNumStates;
constexpr std::uint64_t kMaxBlock = std::uint64_t{1} << 32;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 4);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void block(const std::vector<double>& v) {
    u64(v.size());
    for (double d : v) f64(d);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    read(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<double> block(std::size_t expected = 0) {
    const std::uint64_t n = u64();
    if (n > kMaxBlock) fail("block length out of range");
    if (expected != 0 && n != expected) fail("unexpected block length");
    std::vector<double> v(n);
    for (auto& d : v) d = f64();
    return v;
  }
  void read(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) fail("truncated model file");
  }
  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::kParse, "model file: " + what);
  }

 private:
  std::istream& in_;
};

std::vector<double> hyper_values(const TrainingConfig& c) {
  switch (c.algorithm) {
    case Algorithm::kDecisionTree:
      return {double(c.tree.max_depth), double(c.tree.min_leaf)};
    case Algorithm::kRandomForest:
      return {double(c.forest.n_trees), double(c.forest.feature_subsample),
              double(c.forest.max_depth), double(c.forest.min_leaf)};
    case Algorithm::kLogisticRegression:
      return {c.logistic.learning_rate, double(c.logistic.epochs), c.logistic.l2};
    case Algorithm::kNeuralNet: {
      std::vector<double> v = {double(static_cast<int>(c.nn.activation)), c.nn.learning_rate,
                               double(c.nn.epochs), double(c.nn.batch_size),
                               double(c.nn.hidden.size())};
      for (int w : c.nn.hidden) v.push_back(double(w));
      return v;
    }
  }
  return {};
}

void apply_hyper(TrainingConfig& c, const std::vector<double>& v) {
  auto need = [&](std::size_t n) {
    if (v.size() < n) Reader::fail("hyperparameter block too short");
  };
  switch (c.algorithm) {
    case Algorithm::kDecisionTree:
      need(2);
      c.tree.max_depth = static_cast<int>(v[0]);
      c.tree.min_leaf = static_cast<int>(v[1]);
      break;
    case Algorithm::kRandomForest:
      need(4);
      c.forest.n_trees = static_cast<int>(v[0]);
      c.forest.feature_subsample = static_cast<int>(v[1]);
      c.forest.max_depth = static_cast<int>(v[2]);
      c.forest.min_leaf = static_cast<int>(v[3]);
      break;
    case Algorithm::kLogisticRegression:
      need(3);
      c.logistic.learning_rate = v[0];
      c.logistic.epochs = static_cast<int>(v[1]);
      c.logistic.l2 = v[2];
      break;
    case Algorithm::kNeuralNet: {
      need(5);
      c.nn.activation = static_cast<Activation>(static_cast<int>(v[0]));
      c.nn.learning_rate = v[1];
      c.nn.epochs = static_cast<int>(v[2]);
      c.nn.batch_size = static_cast<int>(v[3]);
      const auto n = static_cast<std::size_t>(v[4]);
      need(5 + n);
      c.nn.hidden.clear();
      for (std::size_t i = 0; i < n; ++i) c.nn.hidden.push_back(static_cast<int>(v[5 + i]));
      break;
    }
  }
}

void write_tree(Writer& w, const TreeStructure& t) {
  std::vector<double> flat;
  flat.reserve(t.nodes.size() * kNodeWidth);
  for (const auto& n : t.nodes) {
    flat.push_back(n.feature);
    flat.push_back(n.threshold);
    flat.push_back(n.left);
    flat.push_back(n.right);
    flat.push_back(n.label);
    flat.insert(flat.end(), n.distribution.begin(), n.distribution.end());
  }
  w.block(flat);
}

TreeStructure read_tree(Reader& r) {
  const auto flat = r.block();
  if (flat.empty() || flat.size() % kNodeWidth != 0) Reader::fail("malformed tree block");
  TreeStructure t;
  const std::size_t n = flat.size() / kNodeWidth;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = flat.data() + i * kNodeWidth;
    TreeNode& node = t.nodes[i];
    node.feature = static_cast<int>(p[0]);
    node.threshold = p[1];
    node.left = static_cast<int>(p[2]);
    node.right = static_cast<int>(p[3]);
    node.label = static_cast<int>(p[4]);
    std::copy_n(p + 5, kNumStates, node.distribution.begin());
    if (node.label < 0 || node.label >= static_cast<int>(kNumStates))
      Reader::fail("tree leaf label out of range");
    if (!node.is_leaf()) {
      const auto in_range = [n, i](int c) {
        return c > static_cast<int>(i) && c < static_cast<int>(n);
      };
      if (node.feature >= static_cast<int>(kNumFeatures) || !in_range(node.left) ||
          !in_range(node.right))
        Reader::fail("tree node references out of range");
    }
  }
  return t;
}

}  // namespace

void Classifier::save(std::ostream& out) const {
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(algorithm()));
  w.u64(config_.seed);
  w.block(hyper_values(config_));
  std::vector<double> scaler(scaler_.lo().begin(), scaler_.lo().end());
  scaler.insert(scaler.end(), scaler_.hi().begin(), scaler_.hi().end());
  w.block(scaler);
  w.f64(train_accuracy_);
  if (const auto* t = std::get_if<TreeStructure>(&params_)) {
    write_tree(w, *t);
  } else if (const auto* f = std::get_if<ForestModel>(&params_)) {
    w.u64(f->trees.size());
    for (const auto& t : f->trees) write_tree(w, t);
  } else if (const auto* m = std::get_if<LinearModel>(&params_)) {
    w.block(m->weights);
    w.block(m->bias);
  } else if (const auto* m = std::get_if<MlpModel>(&params_)) {
    w.u64(m->layers.size());
    for (const auto& l : m->layers) {
      w.u64(static_cast<std::uint64_t>(l.in));
      w.u64(static_cast<std::uint64_t>(l.out));
      w.block(l.weights);
      w.block(l.bias);
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write model");
}

void Classifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  save(out);
}

Classifier Classifier::load(std::istream& in) {
  Reader r(in);
  unsigned char magic[8];
  r.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) Reader::fail("bad magic");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion)
    Reader::fail("unsupported format version " + std::to_string(version));
  const std::uint32_t algo = r.u32();
  if (algo > static_cast<std::uint32_t>(Algorithm::kNeuralNet))
    Reader::fail("unknown algorithm tag");
  TrainingConfig config;
  config.algorithm = static_cast<Algorithm>(algo);
  config.seed = r.u64();
  apply_hyper(config, r.block());
  const auto sc = r.block(2 * kNumFeatures);
  std::array<double, kNumFeatures> lo;
  std::array<double, kNumFeatures> hi;
  std::copy_n(sc.begin(), kNumFeatures, lo.begin());
  std::copy_n(sc.begin() + kNumFeatures, kNumFeatures, hi.begin());
  const double train_acc = r.f64();

  Params params;
  switch (config.algorithm) {
    case Algorithm::kDecisionTree:
      params = read_tree(r);
      break;
    case Algorithm::kRandomForest: {
      ForestModel f;
      const std::uint64_t n = r.u64();
      if (n == 0 || n > 100000) Reader::fail("forest size out of range");
      for (std::uint64_t i = 0; i < n; ++i) f.trees.push_back(read_tree(r));
      params = std::move(f);
      break;
    }
    case Algorithm::kLogisticRegression: {
      LinearModel m;
      m.weights = r.block(kNumStates * kNumFeatures);
      m.bias = r.block(kNumStates);
      params = std::move(m);
      break;
    }
    case Algorithm::kNeuralNet: {
      MlpModel m;
      m.activation = config.nn.activation;
      const std::uint64_t layers = r.u64();
      if (layers == 0 || layers > 64) Reader::fail("layer count out of range");
      for (std::uint64_t l = 0; l < layers; ++l) {
        DenseLayer layer;
        layer.in = static_cast<int>(r.u64());
        layer.out = static_cast<int>(r.u64());
        if (layer.in <= 0 || layer.out <= 0 || layer.in > 1 << 16 || layer.out > 1 << 16)
          Reader::fail("layer shape out of range");
        layer.weights = r.block(static_cast<std::size_t>(layer.in) * layer.out);
        layer.bias = r.block(static_cast<std::size_t>(layer.out));
        m.layers.push_back(std::move(layer));
      }
      params = std::move(m);
      break;
    }
  }
  try {
    return Classifier(config, Scaler(lo, hi), std::move(params), train_acc);
  } catch (const Error& e) {
    Reader::fail(e.what());
  }
}

Classifier Classifier::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file '" + path.string() + "'");
  return load(in);
}

}  // namespace shs
