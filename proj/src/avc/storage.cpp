#include "avc/storage.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "avc/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace avc {

namespace {

void write_f32(const std::string& path, const float* data, size_t count) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Status::Io, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(float)));
  require(out.good(), Status::Io, "write failed: " + path);
}

std::vector<float> read_f32(const std::string& path, size_t expected) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::Io, "cannot open: " + path);
  std::vector<float> data(expected);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(expected * sizeof(float)));
  require(in.gcount() == static_cast<std::streamsize>(expected * sizeof(float)),
          Status::BadFormat, "truncated binary file: " + path);
  char probe;
  require(!in.read(&probe, 1), Status::BadFormat, "oversized binary file: " + path);
  return data;
}

json config_to_json(const FeatureConfig& cfg) {
  return json{{"n_window", cfg.stft.n_window},
              {"n_hop", cfg.stft.n_hop},
              {"centered", cfg.stft.centered},
              {"context_k", cfg.context_k},
              {"n_mel", cfg.n_mel},
              {"hfp_fmin_hz", cfg.hfp_fmin_hz},
              {"hfp_fmax_hz", cfg.hfp_fmax_hz},
              {"trf_percentile", cfg.trf_percentile},
              {"feature_ma", cfg.feature_ma}};
}

FeatureConfig config_from_json(const json& j) {
  FeatureConfig cfg;
  cfg.stft.n_window = j.at("n_window").get<int>();
  cfg.stft.n_hop = j.at("n_hop").get<int>();
  cfg.stft.centered = j.at("centered").get<bool>();
  cfg.context_k = j.at("context_k").get<int>();
  cfg.n_mel = j.at("n_mel").get<int>();
  cfg.hfp_fmin_hz = j.at("hfp_fmin_hz").get<double>();
  cfg.hfp_fmax_hz = j.at("hfp_fmax_hz").get<double>();
  cfg.trf_percentile = j.at("trf_percentile").get<double>();
  cfg.feature_ma = j.at("feature_ma").get<std::vector<int>>();
  return cfg;
}

json layout_to_json(const FeatureConfig& cfg) {
  json blocks = json::array();
  for (const auto& block : FeatureLayout::for_config(cfg).blocks)
    blocks.push_back({{"name", block.name}, {"begin", block.begin}, {"end", block.end}});
  return blocks;
}

json parse_json_file(const std::string& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  require(!j.is_discarded(), Status::BadFormat, "malformed JSON: " + path);
  return j;
}

}  // namespace

void save_feature_cache(const std::string& stem, const FeatureCacheHeader& header,
                        const Matrix& features) {
  require(features.rows == header.n_frames && features.cols == header.n_features,
          Status::DimensionMismatch, "header/matrix shape mismatch");
  json j;
  j["format"] = "avc-features-v1";
  j["clip_id"] = header.clip_id;
  j["m"] = header.n_frames;
  j["d"] = header.n_features;
  j["n_samples"] = header.n_samples;
  j["sample_rate"] = header.sample_rate;
  j["layout"] = layout_to_json(header.config);
  j["config"] = config_to_json(header.config);
  write_text_file(stem + ".json", j.dump(2) + "\n");
  write_f32(stem + ".bin", features.data.data(), features.data.size());
}

Matrix load_feature_cache(const std::string& stem, FeatureCacheHeader* header) {
  json j = parse_json_file(stem + ".json");
  require(j.value("format", "") == "avc-features-v1", Status::BadFormat,
          "not a feature cache: " + stem);
  FeatureCacheHeader h;
  h.clip_id = j.at("clip_id").get<std::string>();
  h.n_frames = j.at("m").get<int64_t>();
  h.n_features = j.at("d").get<int64_t>();
  h.n_samples = j.at("n_samples").get<int64_t>();
  h.sample_rate = j.at("sample_rate").get<int>();
  h.config = config_from_json(j.at("config"));

  Matrix m(h.n_frames, h.n_features);
  m.data = read_f32(stem + ".bin", static_cast<size_t>(h.n_frames * h.n_features));
  if (header) *header = h;
  return m;
}

bool feature_cache_fresh(const std::string& stem, const FeatureCacheHeader& expected) {
  if (!fs::exists(stem + ".json") || !fs::exists(stem + ".bin")) return false;
  try {
    json j = parse_json_file(stem + ".json");
    if (j.value("format", "") != "avc-features-v1") return false;
    if (j.at("clip_id").get<std::string>() != expected.clip_id) return false;
    if (j.at("n_samples").get<int64_t>() != expected.n_samples) return false;
    if (j.at("sample_rate").get<int>() != expected.sample_rate) return false;
    if (j.at("config") != config_to_json(expected.config)) return false;
    const auto m = j.at("m").get<int64_t>();
    const auto d = j.at("d").get<int64_t>();
    const auto bin_size = fs::file_size(stem + ".bin");
    return bin_size == static_cast<uintmax_t>(m * d) * sizeof(float);
  } catch (const std::exception&) {
    return false;
  }
}

void save_target_cache(const std::string& stem, const TargetCacheHeader& header,
                       const Series& target) {
  require(static_cast<int64_t>(target.size()) == header.n_frames,
          Status::DimensionMismatch, "header/target length mismatch");
  json j;
  j["format"] = "avc-target-v1";
  j["clip_id"] = header.clip_id;
  j["m"] = header.n_frames;
  j["t_d"] = header.t_d;
  j["frame_hop_s"] = header.frame_hop_s;
  write_text_file(stem + ".json", j.dump(2) + "\n");
  std::vector<float> data(target.begin(), target.end());
  write_f32(stem + ".bin", data.data(), data.size());
}

Series load_target_cache(const std::string& stem, TargetCacheHeader* header) {
  json j = parse_json_file(stem + ".json");
  require(j.value("format", "") == "avc-target-v1", Status::BadFormat,
          "not a target cache: " + stem);
  TargetCacheHeader h;
  h.clip_id = j.at("clip_id").get<std::string>();
  h.n_frames = j.at("m").get<int64_t>();
  h.t_d = j.at("t_d").get<double>();
  h.frame_hop_s = j.at("frame_hop_s").get<double>();
  std::vector<float> data = read_f32(stem + ".bin", static_cast<size_t>(h.n_frames));
  if (header) *header = h;
  return Series(data.begin(), data.end());
}

bool target_cache_fresh(const std::string& stem, const TargetCacheHeader& expected) {
  if (!fs::exists(stem + ".json") || !fs::exists(stem + ".bin")) return false;
  try {
    json j = parse_json_file(stem + ".json");
    if (j.value("format", "") != "avc-target-v1") return false;
    if (j.at("clip_id").get<std::string>() != expected.clip_id) return false;
    if (j.at("m").get<int64_t>() != expected.n_frames) return false;
    if (j.at("t_d").get<double>() != expected.t_d) return false;
    if (j.at("frame_hop_s").get<double>() != expected.frame_hop_s) return false;
    return fs::file_size(stem + ".bin") ==
           static_cast<uintmax_t>(expected.n_frames) * sizeof(float);
  } catch (const std::exception&) {
    return false;
  }
}

void save_model(const SvrModel& model, const std::string& stem,
                const std::optional<FeatureConfig>& feature_config,
                std::optional<double> t_d) {
  json j;
  j["format"] = "avc-model-v1";
  j["kernel"] = model.config.kernel == KernelType::rbf ? "rbf" : "linear";
  j["c"] = model.config.c;
  j["epsilon"] = model.config.epsilon;
  j["gamma"] = model.config.gamma;
  j["tol"] = model.config.tol;
  j["dims"] = model.dims;
  j["n_sv"] = model.n_support();
  j["bias"] = model.bias;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  j["dual_objective"] = model.dual_objective;
  if (!model.feature_subset.empty()) j["feature_subset"] = model.feature_subset;
  if (feature_config) j["feature_config"] = config_to_json(*feature_config);
  if (t_d) j["t_d"] = *t_d;
  write_text_file(stem + ".json", j.dump(2) + "\n");

  std::vector<float> blob;
  blob.reserve(model.support_vectors.data.size() + model.dual_coefs.size());
  blob.insert(blob.end(), model.support_vectors.data.begin(), model.support_vectors.data.end());
  for (double c : model.dual_coefs) blob.push_back(static_cast<float>(c));
  write_f32(stem + ".bin", blob.data(), blob.size());
}

SvrModel load_model(const std::string& stem, ModelExtras* extras) {
  json j = parse_json_file(stem + ".json");
  require(j.value("format", "") == "avc-model-v1", Status::BadFormat,
          "not a model file: " + stem);
  SvrModel model;
  model.config.kernel =
      j.at("kernel").get<std::string>() == "linear" ? KernelType::linear : KernelType::rbf;
  model.config.c = j.at("c").get<double>();
  model.config.epsilon = j.at("epsilon").get<double>();
  model.config.gamma = j.at("gamma").get<double>();
  model.config.tol = j.at("tol").get<double>();
  model.dims = j.at("dims").get<int64_t>();
  model.bias = j.at("bias").get<double>();
  model.converged = j.at("converged").get<bool>();
  model.iterations = j.at("iterations").get<int64_t>();
  model.dual_objective = j.at("dual_objective").get<double>();
  if (j.contains("feature_subset"))
    model.feature_subset = j.at("feature_subset").get<std::vector<std::string>>();

  const int64_t n_sv = j.at("n_sv").get<int64_t>();
  std::vector<float> blob =
      read_f32(stem + ".bin", static_cast<size_t>(n_sv * model.dims + n_sv));
  model.support_vectors = Matrix(n_sv, model.dims);
  std::copy(blob.begin(), blob.begin() + n_sv * model.dims,
            model.support_vectors.data.begin());
  model.dual_coefs.resize(static_cast<size_t>(n_sv));
  for (int64_t i = 0; i < n_sv; ++i)
    model.dual_coefs[static_cast<size_t>(i)] =
        static_cast<double>(blob[static_cast<size_t>(n_sv * model.dims + i)]);

  if (extras) {
    if (j.contains("feature_config"))
      extras->feature_config = config_from_json(j.at("feature_config"));
    if (j.contains("t_d")) extras->t_d = j.at("t_d").get<double>();
  }
  return model;
}

}  // namespace avc
