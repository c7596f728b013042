#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "trollscope/model.hpp"

namespace trollscope::sources {

enum class SourceClass { regular, scheduling, fake, other };

std::string_view to_string(SourceClass c);

// Client-name lists used to classify tweet sources. Immutable once built.
//
// canonical always includes regular and scheduling: a mangled scheduler name
// such as "hootsuite" is an impersonation of "Hootsuite". known_fakes holds
// third-party look-alikes that whitespace/case folding cannot catch
// ("Twitter for iphons", "Twidere for Android #5").
class SourceCatalog {
 public:
  SourceCatalog(std::set<std::string> regular, std::set<std::string> scheduling,
                std::set<std::string> canonical, std::set<std::string> known_fakes);

  // The shipped catalog (resources/source_catalog.json).
  static const SourceCatalog& defaults();

  // JSON object with any of "regular", "scheduling", "canonical",
  // "known_fakes"; missing lists fall back to the defaults.
  static SourceCatalog parse(std::string_view json_text);
  static SourceCatalog load(const std::filesystem::path& path);

  std::string to_json() const;

  // SHA-256 of to_json().
  std::string digest() const;

  const std::set<std::string>& regular() const { return regular_; }
  const std::set<std::string>& scheduling() const { return scheduling_; }
  const std::set<std::string>& canonical() const { return canonical_; }
  const std::set<std::string>& known_fakes() const { return known_fakes_; }

  // Canonical name whose collapsed form equals collapse(name), if any.
  const std::string* canonical_match(std::string_view name) const;

 private:
  std::set<std::string> regular_;
  std::set<std::string> scheduling_;
  std::set<std::string> canonical_;
  std::set<std::string> known_fakes_;
  std::unordered_map<std::string, std::string> collapsed_canonical_;
};

// Trim, collapse internal whitespace runs to one space, ASCII-lowercase.
std::string collapse(std::string_view name);

// True for known fakes and for whitespace/case mangles of a canonical name.
bool is_fake_source(std::string_view name, const SourceCatalog& catalog);

SourceClass classify_source(std::string_view name, const SourceCatalog& catalog);

struct SourceStats {
  std::size_t distinct_sources = 0;
  double fraction_fake = 0.0;
  double fraction_regular = 0.0;
  double fraction_scheduled = 0.0;
};

SourceStats source_stats(const Account& account, const SourceCatalog& catalog);

}  // namespace trollscope::sources
