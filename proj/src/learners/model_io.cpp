#include <fstream>
#include <sstream>

#include "json.hpp"

#include "trollscope/error.hpp"
#include "trollscope/learners.hpp"

namespace trollscope::learn {
namespace {

using nlohmann::json;

json scaler_json(const Scaler& s) { return {{"minimum", s.minimum}, {"range", s.range}}; }

Scaler scaler_from(const json& j) {
  Scaler s;
  j.at("minimum").get_to(s.minimum);
  j.at("range").get_to(s.range);
  return s;
}

json matrix_json(const Matrix& m) { return {{"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from(const json& j) {
  const auto cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (cols == 0 || data.size() % cols != 0) throw SchemaError("malformed matrix in model file");
  Matrix m(0, cols);
  for (std::size_t i = 0; i < data.size(); i += cols) m.push_row(std::span<const double>(data).subspan(i, cols));
  return m;
}

// Trees are stored column-wise to keep files compact.
json tree_json(const DecisionTree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       fraction = json::array(), impurity = json::array(), samples = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    fraction.push_back(n.troll_fraction);
    impurity.push_back(n.impurity);
    samples.push_back(n.samples);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},      {"right", right},
          {"troll_fraction", fraction}, {"impurity", impurity}, {"samples", samples}};
}

DecisionTree tree_from(const json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto fraction = j.at("troll_fraction").get<std::vector<double>>();
  const auto impurity = j.at("impurity").get<std::vector<double>>();
  const auto samples = j.at("samples").get<std::vector<std::uint32_t>>();
  const auto n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || fraction.size() != n ||
      impurity.size() != n || samples.size() != n) {
    throw SchemaError("malformed tree in model file");
  }
  DecisionTree t;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (feature[i] >= 0 && (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
                            left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n))) {
      throw SchemaError("malformed tree in model file");
    }
    t.nodes[i] = {feature[i], threshold[i], left[i], right[i], fraction[i], impurity[i], samples[i]};
  }
  return t;
}

json payload_json(const Payload& payload) {
  struct Visitor {
    json operator()(const KnnPayload& p) const {
      return {{"scaler", scaler_json(p.scaler)}, {"x", matrix_json(p.x)}, {"y", p.y}};
    }
    json operator()(const DecisionTree& t) const { return tree_json(t); }
    json operator()(const SvmPayload& p) const {
      return {{"scaler", scaler_json(p.scaler)}, {"weights", p.weights}, {"bias", p.bias}};
    }
    json operator()(const ForestPayload& f) const {
      json trees = json::array();
      for (const auto& t : f.trees) trees.push_back(tree_json(t));
      return {{"trees", trees}};
    }
  };
  return std::visit(Visitor{}, payload);
}

Payload payload_from(Algorithm a, const json& j) {
  switch (a) {
    case Algorithm::knn: {
      KnnPayload p{scaler_from(j.at("scaler")), matrix_from(j.at("x")), j.at("y").get<std::vector<int>>()};
      if (p.x.rows() != p.y.size()) throw SchemaError("knn payload size mismatch");
      return p;
    }
    case Algorithm::decision_tree: return tree_from(j);
    case Algorithm::linear_svm:
      return SvmPayload{scaler_from(j.at("scaler")), j.at("weights").get<std::vector<double>>(),
                        j.at("bias").get<double>()};
    case Algorithm::random_forest: {
      ForestPayload f;
      for (const auto& t : j.at("trees")) f.trees.push_back(tree_from(t));
      if (f.trees.empty()) throw SchemaError("forest payload has no trees");
      return f;
    }
  }
  throw SchemaError("unknown algorithm in model file");
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  json j;
  j["magic"] = kModelMagic;
  j["version"] = kModelVersion;
  j["algorithm"] = to_string(m.algorithm);
  j["hyperparams"] = m.hyperparams.to_map();
  j["seed"] = m.seed;
  j["feature_names"] = m.feature_names;
  j["columns"] = m.columns;
  j["payload"] = payload_json(m.payload);
  j["importances"] = m.importances ? json(*m.importances) : json(nullptr);
  j["training_ids"] = m.training_ids;
  j["language_codes"] = m.language_codes;
  j["catalog_sha256"] = m.catalog_digest;
  j["reference_time"] = m.reference_time;
  return j.dump(-1, ' ', false, json::error_handler_t::replace) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("magic", std::string()) != kModelMagic) {
      throw SchemaError("not a trollscope model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelVersion) {
      throw SchemaError("unsupported model version " + std::to_string(version));
    }
    TrainedModel m;
    m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    m.hyperparams = Hyperparams::from_map(j.at("hyperparams").get<std::map<std::string, std::string>>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.columns = j.at("columns").get<std::vector<std::size_t>>();
    if (m.columns.size() != m.feature_names.size()) throw SchemaError("model columns and names disagree");
    const auto names = features::feature_names();
    for (std::size_t i = 0; i < m.columns.size(); ++i) {
      if (m.columns[i] >= names.size() || names[m.columns[i]] != m.feature_names[i]) {
        throw SchemaError("model feature '" + m.feature_names[i] + "' does not match the feature layout");
      }
    }
    m.payload = payload_from(m.algorithm, j.at("payload"));
    if (!j.at("importances").is_null()) m.importances = j.at("importances").get<std::vector<double>>();
    m.training_ids = j.at("training_ids").get<std::vector<std::string>>();
    m.language_codes = j.at("language_codes").get<std::vector<std::string>>();
    m.catalog_digest = j.at("catalog_sha256").get<std::string>();
    m.reference_time = j.at("reference_time").get<std::int64_t>();
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw DataError("failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace trollscope::learn
