#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trollscope/diagnostics.hpp"
#include "trollscope/model.hpp"

namespace testing {

inline trollscope::Tweet tweet(const std::string& id, std::int64_t ts, const std::string& text,
                               const std::string& client = "Twitter Web Client", bool rt = false,
                               const std::string& lang = "en") {
  trollscope::Tweet t;
  t.tweet_id = id;
  t.text = text;
  t.timestamp = ts;
  t.client_name = client;
  t.is_retweet = rt;
  t.language = lang;
  return t;
}

inline trollscope::Account account(const std::string& id, std::vector<trollscope::Tweet> tweets = {},
                                   std::int64_t created = 1400000000) {
  trollscope::Account a;
  a.account_id = id;
  a.screen_name = "sn_" + id;
  a.description = "hello world";
  a.account_language = "en";
  a.description_language = "en";
  a.followers = 10;
  a.following = 20;
  a.creation_time = created;
  for (auto& t : tweets) t.account_id = id;
  a.tweets = std::move(tweets);
  return a;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("trollscope_" + tag + "_" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    previous_ = trollscope::set_warning_sink([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { trollscope::set_warning_sink(previous_); }

  std::vector<std::string> messages;

 private:
  trollscope::WarningSink previous_;
};

}  // namespace testing
