#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "trollscope/error.hpp"
#include "trollscope/features.hpp"
#include "trollscope/util/csv.hpp"
#include "trollscope/util/format.hpp"

namespace trollscope::features {

using nlohmann::json;

namespace {

double parse_value(const std::string& s, std::size_t line, const std::string& path) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(path + ":" + std::to_string(line) + ": bad numeric value '" + s + "'");
  }
  return v;
}

}  // namespace

std::filesystem::path provenance_path(const std::filesystem::path& dataset_path) {
  auto p = dataset_path;
  p += ".provenance.json";
  return p;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  std::vector<std::string> fields(dataset.feature_names.begin(), dataset.feature_names.end());
  fields.push_back("label");
  csv::write_row(out, fields);
  for (const auto& row : dataset.rows) {
    fields.clear();
    for (double v : row.features.values) fields.push_back(fmt::number(v));
    fields.emplace_back(to_string(row.label));
    csv::write_row(out, fields);
  }

  json rows = json::array();
  for (const auto& row : dataset.rows) {
    rows.push_back({{"account_id", row.features.account_id}, {"provenance", row.provenance}});
  }
  const json sidecar = {{"format", "trollscope-dataset-provenance"},
                        {"version", 1},
                        {"reference_time", dataset.reference_time},
                        {"catalog_sha256", dataset.catalog_digest},
                        {"languages", dataset.language_codes},
                        {"rows", std::move(rows)}};
  std::ofstream side(provenance_path(path), std::ios::binary);
  if (!side) throw DataError("cannot write " + provenance_path(path).string());
  side << sidecar.dump(1, ' ', false, json::error_handler_t::replace) << '\n';
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw EmptyCorpusError("empty dataset file " + path.string());
  const auto& names = feature_names();
  if (header.size() != kFeatureCount + 1 || header.back() != "label") {
    throw SchemaError(path.string() + ": expected 45 feature columns followed by 'label'");
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (header[i] != names[i]) {
      throw SchemaError(path.string() + ": column " + std::to_string(i + 1) + " is '" + header[i] +
                        "', expected '" + names[i] + "'");
    }
  }
  Dataset d;
  d.feature_names.assign(names.begin(), names.end());
  d.language_codes = LanguageTable::defaults().codes();
  std::vector<std::string> row;
  std::size_t line = 1;
  while (reader.next(row)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != kFeatureCount + 1) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": expected 46 fields");
    }
    DatasetRow r;
    for (std::size_t i = 0; i < kFeatureCount; ++i) r.features.values[i] = parse_value(row[i], line, path.string());
    r.label = parse_label(row.back());
    if (r.label == Label::unlabeled) throw DataError(path.string() + ": dataset rows must be troll or benign");
    r.features.account_id = "row" + std::to_string(d.rows.size());
    d.rows.push_back(std::move(r));
  }

  const auto side_path = provenance_path(path);
  std::ifstream side(side_path, std::ios::binary);
  if (side) {
    try {
      const json j = json::parse(side);
      d.reference_time = j.value("reference_time", std::int64_t{0});
      d.catalog_digest = j.value("catalog_sha256", "");
      d.language_codes = j.at("languages").get<std::vector<std::string>>();
      const auto& rows = j.at("rows");
      if (rows.size() != d.rows.size()) throw DataError(side_path.string() + ": row count does not match dataset");
      for (std::size_t i = 0; i < d.rows.size(); ++i) {
        d.rows[i].features.account_id = rows[i].at("account_id").get<std::string>();
        d.rows[i].provenance = rows[i].value("provenance", "");
      }
    } catch (const json::exception& e) {
      throw DataError(side_path.string() + ": " + e.what());
    }
  }
  return d;
}

}  // namespace trollscope::features
