#include "trollscope/source_intel.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "trollscope/error.hpp"
#include "trollscope/resources.hpp"
#include "trollscope/util/hash.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::sources {

using nlohmann::json;

std::string_view to_string(SourceClass c) {
  switch (c) {
    case SourceClass::regular:
      return "regular";
    case SourceClass::scheduling:
      return "scheduling";
    case SourceClass::fake:
      return "fake";
    case SourceClass::other:
      return "other";
  }
  return "other";
}

SourceCatalog::SourceCatalog(std::set<std::string> regular, std::set<std::string> scheduling,
                             std::set<std::string> canonical, std::set<std::string> known_fakes)
    : regular_(std::move(regular)),
      scheduling_(std::move(scheduling)),
      canonical_(std::move(canonical)),
      known_fakes_(std::move(known_fakes)) {
  canonical_.insert(regular_.begin(), regular_.end());
  canonical_.insert(scheduling_.begin(), scheduling_.end());
  for (const auto& name : known_fakes_) {
    if (canonical_.contains(name)) {
      throw DataError("source catalog: '" + name + "' is both canonical and a known fake");
    }
  }
  for (const auto& name : canonical_) {
    auto [it, inserted] = collapsed_canonical_.emplace(collapse(name), name);
    if (!inserted && name < it->second) it->second = name;
  }
}

const SourceCatalog& SourceCatalog::defaults() {
  static const SourceCatalog catalog = [] {
    const json j = json::parse(resources::source_catalog);
    const auto list = [&](const char* key) { return j.at(key).get<std::set<std::string>>(); };
    return SourceCatalog(list("regular"), list("scheduling"), list("canonical"), list("known_fakes"));
  }();
  return catalog;
}

SourceCatalog SourceCatalog::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("source catalog: ") + e.what());
  }
  if (!j.is_object()) throw DataError("source catalog must be a JSON object");
  const auto& d = defaults();
  const auto list = [&](const char* key, const std::set<std::string>& fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
      return it->get<std::set<std::string>>();
    } catch (const json::exception&) {
      throw DataError(std::string("source catalog: '") + key + "' must be a list of strings");
    }
  };
  return SourceCatalog(list("regular", d.regular()), list("scheduling", d.scheduling()),
                       list("canonical", d.canonical()), list("known_fakes", d.known_fakes()));
}

SourceCatalog SourceCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open source catalog " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string SourceCatalog::to_json() const {
  const json j = {{"regular", regular_},
                  {"scheduling", scheduling_},
                  {"canonical", canonical_},
                  {"known_fakes", known_fakes_}};
  return j.dump(2);
}

std::string SourceCatalog::digest() const { return hash::sha256(to_json()); }

const std::string* SourceCatalog::canonical_match(std::string_view name) const {
  auto it = collapsed_canonical_.find(collapse(name));
  return it == collapsed_canonical_.end() ? nullptr : &it->second;
}

std::string collapse(std::string_view name) { return text::ascii_lower(text::collapse_whitespace(name)); }

bool is_fake_source(std::string_view name, const SourceCatalog& catalog) {
  const std::string key(name);
  if (catalog.known_fakes().contains(key)) return true;
  if (catalog.canonical().contains(key)) return false;
  return catalog.canonical_match(name) != nullptr;
}

SourceClass classify_source(std::string_view name, const SourceCatalog& catalog) {
  const std::string key(name);
  if (catalog.regular().contains(key)) return SourceClass::regular;
  if (catalog.scheduling().contains(key)) return SourceClass::scheduling;
  if (is_fake_source(name, catalog)) return SourceClass::fake;
  return SourceClass::other;
}

SourceStats source_stats(const Account& account, const SourceCatalog& catalog) {
  SourceStats stats;
  if (account.tweets.empty()) return stats;
  std::set<std::string_view> distinct;
  std::size_t fake = 0, regular = 0, scheduled = 0;
  for (const auto& t : account.tweets) {
    distinct.insert(t.client_name);
    switch (classify_source(t.client_name, catalog)) {
      case SourceClass::regular:
        ++regular;
        break;
      case SourceClass::scheduling:
        ++scheduled;
        break;
      case SourceClass::fake:
        ++fake;
        break;
      case SourceClass::other:
        break;
    }
  }
  const double n = static_cast<double>(account.tweets.size());
  stats.distinct_sources = distinct.size();
  stats.fraction_fake = static_cast<double>(fake) / n;
  stats.fraction_regular = static_cast<double>(regular) / n;
  stats.fraction_scheduled = static_cast<double>(scheduled) / n;
  return stats;
}

}  // namespace trollscope::sources
