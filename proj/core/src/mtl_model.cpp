#include "ridecomfort/mtl_model.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/random.hpp"

namespace ridecomfort {

namespace {

constexpr int kModelVersion = 1;

DenseLayer make_layer(int in, int out, std::uint64_t seed) {
  DenseLayer layer;
  layer.in = in;
  layer.out = out;
  layer.weight.resize(static_cast<std::size_t>(in) * static_cast<std::size_t>(out));
  layer.bias.assign(static_cast<std::size_t>(out), 0.0);
  SeededRng rng(seed);
  const double limit = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto& w : layer.weight) w = rng.uniform(-limit, limit);
  return layer;
}

std::uint64_t head_seed(std::uint64_t model_seed, std::size_t index) {
  return mix_seed(model_seed, 1000 + index);
}

nlohmann::json layer_to_json(const DenseLayer& l) {
  return {{"in", l.in}, {"out", l.out}, {"weight", l.weight}, {"bias", l.bias}};
}

DenseLayer layer_from_json(const nlohmann::json& j) {
  DenseLayer l;
  j.at("in").get_to(l.in);
  j.at("out").get_to(l.out);
  j.at("weight").get_to(l.weight);
  j.at("bias").get_to(l.bias);
  if (l.in < 1 || l.out < 1 || l.weight.size() != static_cast<std::size_t>(l.in * l.out) ||
      l.bias.size() != static_cast<std::size_t>(l.out)) {
    throw ParseError(0, "inconsistent layer shape in model checkpoint");
  }
  return l;
}

}  // namespace

InputScale fit_input_scale(std::span<const FeatureVector> features) {
  InputScale s{0.0, 0.0};
  for (const auto& fv : features) {
    s.travel_time_max = std::max(s.travel_time_max, fv.travel_time);
    s.distance_max = std::max(s.distance_max, fv.distance);
  }
  if (!(s.travel_time_max > 0.0)) s.travel_time_max = 1.0;
  if (!(s.distance_max > 0.0)) s.distance_max = 1.0;
  return s;
}

ModelInput model_input(const FeatureVector& fv, const InputScale& scale) {
  validate(fv);
  ModelInput x{};
  x[0] = fv.l_speed;
  x[1] = fv.l_jerk;
  x[2] = fv.l_cong;
  x[3] = fv.travel_time / scale.travel_time_max;
  x[4] = fv.distance / scale.distance_max;
  x[5 + fv.zone] = 1.0;
  return x;
}

std::array<double, kComfortLevels> softmax(const std::array<double, kComfortLevels>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  std::array<double, kComfortLevels> p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(z[i] - top);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

MtlModel::MtlModel(int hidden, std::uint64_t seed, const InputScale& scale)
    : seed_(seed), scale_(scale) {
  if (hidden < 1) throw ValidationError("hidden", "must be >= 1");
  shared_ = make_layer(kModelInputs, hidden, mix_seed(seed, 1));
}

std::size_t MtlModel::register_commuter(const std::string& commuter_id) {
  if (auto it = registry_.find(commuter_id); it != registry_.end()) return it->second;
  if (commuter_id.empty()) throw ValidationError("commuter_id", "must be non-empty");
  const std::size_t index = heads_.size();
  heads_.push_back(make_layer(hidden(), kComfortLevels, head_seed(seed_, index)));
  commuters_.push_back(commuter_id);
  registry_.emplace(commuter_id, index);
  return index;
}

std::optional<std::size_t> MtlModel::head_index(const std::string& commuter_id) const {
  auto it = registry_.find(commuter_id);
  if (it == registry_.end()) return std::nullopt;
  return it->second;
}

void MtlModel::hidden_activation(const ModelInput& x, std::vector<double>& pre,
                                 std::vector<double>& out) const {
  const auto h = static_cast<std::size_t>(shared_.out);
  pre.resize(h);
  out.resize(h);
  for (std::size_t r = 0; r < h; ++r) {
    double s = shared_.bias[r];
    const double* w = &shared_.weight[r * kModelInputs];
    for (std::size_t c = 0; c < kModelInputs; ++c) s += w[c] * x[c];
    pre[r] = s;
    out[r] = s > 0.0 ? s : 0.0;
  }
}

void MtlModel::head_logits(std::size_t head, const std::vector<double>& h,
                           std::array<double, kComfortLevels>& z) const {
  const auto& layer = heads_[head];
  const auto width = static_cast<std::size_t>(layer.in);
  for (std::size_t r = 0; r < kComfortLevels; ++r) {
    double s = layer.bias[r];
    const double* w = &layer.weight[r * width];
    for (std::size_t c = 0; c < width; ++c) s += w[c] * h[c];
    z[r] = s;
  }
}

IndicatorVector MtlModel::forward_head(std::size_t head, const ModelInput& x) const {
  if (head >= heads_.size()) throw UnregisteredCommuterError("no head " + std::to_string(head));
  std::vector<double> pre;
  std::vector<double> h;
  hidden_activation(x, pre, h);
  std::array<double, kComfortLevels> z{};
  head_logits(head, h, z);
  return IndicatorVector{softmax(z)};
}

IndicatorVector MtlModel::forward(const std::string& commuter_id, const FeatureVector& fv) const {
  const auto head = head_index(commuter_id);
  if (!head) {
    throw UnregisteredCommuterError("commuter '" + commuter_id +
                                    "' has no trained head; retrain with labeled trips for this commuter");
  }
  return forward_head(*head, model_input(fv, scale_));
}

IndicatorVector MtlModel::forward_population(const FeatureVector& fv) const {
  if (heads_.empty()) throw UnregisteredCommuterError("model has no heads");
  const auto x = model_input(fv, scale_);
  std::vector<double> pre;
  std::vector<double> h;
  hidden_activation(x, pre, h);
  IndicatorVector out;
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    std::array<double, kComfortLevels> z{};
    head_logits(k, h, z);
    const auto p = softmax(z);
    for (std::size_t i = 0; i < p.size(); ++i) out.p[i] += p[i];
  }
  for (auto& v : out.p) v /= static_cast<double>(heads_.size());
  return out;
}

IndicatorVector MtlModel::forward_or_population(const std::string& commuter_id,
                                                const FeatureVector& fv) const {
  return has_commuter(commuter_id) ? forward(commuter_id, fv) : forward_population(fv);
}

double MtlModel::loss(std::span<const Example> batch) const {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto p = forward_head(ex.head, ex.input).p;
    total -= std::log(std::max(p[static_cast<std::size_t>(ex.level - 1)], 1e-300));
  }
  return total / static_cast<double>(batch.size());
}

double MtlModel::loss_and_gradient(std::span<const Example> batch, std::vector<double>& gradient) const {
  gradient.assign(parameter_count(), 0.0);
  if (batch.empty()) return 0.0;
  const auto hdim = static_cast<std::size_t>(shared_.out);
  const std::size_t shared_w = shared_.weight.size();
  const std::size_t shared_size = shared_.size();
  const std::size_t head_size = heads_.empty() ? 0 : heads_.front().size();
  const double scale = 1.0 / static_cast<double>(batch.size());

  std::vector<double> pre;
  std::vector<double> h;
  std::vector<double> dh(hdim);
  double total = 0.0;
  for (const auto& ex : batch) {
    if (ex.head >= heads_.size()) throw UnregisteredCommuterError("no head " + std::to_string(ex.head));
    if (ex.level < 1 || ex.level > kComfortLevels) throw ValidationError("level", "expected 1..5");
    hidden_activation(ex.input, pre, h);
    std::array<double, kComfortLevels> z{};
    head_logits(ex.head, h, z);
    const auto p = softmax(z);
    const auto y = static_cast<std::size_t>(ex.level - 1);
    total -= std::log(std::max(p[y], 1e-300));

    const auto& layer = heads_[ex.head];
    double* gw = &gradient[shared_size + ex.head * head_size];
    double* gb = gw + layer.weight.size();
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t r = 0; r < kComfortLevels; ++r) {
      const double dz = (p[r] - (r == y ? 1.0 : 0.0)) * scale;
      gb[r] += dz;
      const double* w = &layer.weight[r * hdim];
      double* g = gw + r * hdim;
      for (std::size_t c = 0; c < hdim; ++c) {
        g[c] += dz * h[c];
        dh[c] += dz * w[c];
      }
    }
    for (std::size_t r = 0; r < hdim; ++r) {
      if (pre[r] <= 0.0) continue;
      double* g = &gradient[r * kModelInputs];
      for (std::size_t c = 0; c < kModelInputs; ++c) g[c] += dh[r] * ex.input[c];
      gradient[shared_w + r] += dh[r];
    }
  }
  return total * scale;
}

std::size_t MtlModel::parameter_count() const {
  std::size_t n = shared_.size();
  for (const auto& h : heads_) n += h.size();
  return n;
}

std::vector<double> MtlModel::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  auto append = [&out](const DenseLayer& l) {
    out.insert(out.end(), l.weight.begin(), l.weight.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  };
  append(shared_);
  for (const auto& h : heads_) append(h);
  return out;
}

void MtlModel::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) throw ValidationError("parameters", "size mismatch");
  std::size_t pos = 0;
  auto take = [&](DenseLayer& l) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), l.weight.size(), l.weight.begin());
    pos += l.weight.size();
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.begin());
    pos += l.bias.size();
  };
  take(shared_);
  for (auto& h : heads_) take(h);
}

nlohmann::json MtlModel::to_json() const {
  nlohmann::json heads = nlohmann::json::array();
  for (std::size_t i = 0; i < heads_.size(); ++i) {
    heads.push_back({{"commuter_id", commuters_[i]}, {"layer", layer_to_json(heads_[i])}});
  }
  return {{"format", "ridecomfort-mtl"},
          {"version", kModelVersion},
          {"seed", seed_},
          {"scale", {{"travel_time_max", scale_.travel_time_max}, {"distance_max", scale_.distance_max}}},
          {"shared", layer_to_json(shared_)},
          {"heads", heads}};
}

MtlModel MtlModel::from_json(const nlohmann::json& j) {
  if (j.at("format") != "ridecomfort-mtl") throw ParseError(0, "not a model checkpoint");
  if (j.at("version") != kModelVersion) throw ParseError(0, "unsupported model version");
  MtlModel m;
  j.at("seed").get_to(m.seed_);
  j.at("scale").at("travel_time_max").get_to(m.scale_.travel_time_max);
  j.at("scale").at("distance_max").get_to(m.scale_.distance_max);
  m.shared_ = layer_from_json(j.at("shared"));
  if (m.shared_.in != kModelInputs) throw ParseError(0, "shared layer input width must be 9");
  for (const auto& h : j.at("heads")) {
    auto layer = layer_from_json(h.at("layer"));
    if (layer.in != m.shared_.out || layer.out != kComfortLevels) {
      throw ParseError(0, "head shape does not match shared layer");
    }
    const auto id = h.at("commuter_id").get<std::string>();
    if (!m.registry_.emplace(id, m.heads_.size()).second) {
      throw ParseError(0, "duplicate commuter '" + id + "' in model checkpoint");
    }
    m.commuters_.push_back(id);
    m.heads_.push_back(std::move(layer));
  }
  return m;
}

void MtlModel::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump() + "\n");
}

MtlModel MtlModel::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

}  // namespace ridecomfort
