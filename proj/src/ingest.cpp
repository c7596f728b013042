#include "trollscope/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "trollscope/error.hpp"
#include "trollscope/util/csv.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::ingest {

using nlohmann::json;

namespace {

std::optional<char32_t> decode_entity(std::string_view body) {
  if (body == "amp") return U'&';
  if (body == "lt") return U'<';
  if (body == "gt") return U'>';
  if (body == "quot") return U'"';
  if (body == "apos") return U'\'';
  if (body == "nbsp") return char32_t{0xA0};
  if (body.size() >= 2 && body[0] == '#') {
    unsigned long value = 0;
    const bool hex = body[1] == 'x' || body[1] == 'X';
    const auto digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, hex ? 16 : 10);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value > 0x10FFFF) {
      return std::nullopt;
    }
    return static_cast<char32_t>(value);
  }
  return std::nullopt;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i + 1);
      if (semi != std::string_view::npos && semi - i <= 10) {
        if (auto cp = decode_entity(s.substr(i + 1, semi - i - 1))) {
          text::append_utf8(out, *cp);
          i = semi;
          continue;
        }
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<std::int64_t> to_epoch(int y, int mo, int d, int h, int mi, int sec, int offset_minutes) {
  using namespace std::chrono;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) return std::nullopt;
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t t = days * 86400 + h * 3600 + mi * 60 + sec - std::int64_t{offset_minutes} * 60;
  if (t < 0) return std::nullopt;
  return t;
}

int month_from_name(std::string_view m) {
  static constexpr std::array<std::string_view, 12> kNames = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == m) return static_cast<int>(i) + 1;
  }
  return 0;
}

bool parse_clock(std::string_view s, int& h, int& mi, int& sec) {
  // HH:MM or HH:MM:SS
  sec = 0;
  if (s.size() == 5 && s[2] == ':') {
    return parse_int(s.substr(0, 2), h) && parse_int(s.substr(3, 2), mi);
  }
  if (s.size() == 8 && s[2] == ':' && s[5] == ':') {
    return parse_int(s.substr(0, 2), h) && parse_int(s.substr(3, 2), mi) && parse_int(s.substr(6, 2), sec);
  }
  return false;
}

bool parse_offset(std::string_view s, int& minutes) {
  if (s == "GMT" || s == "UTC" || s == "Z") {
    minutes = 0;
    return true;
  }
  if (s.size() != 5 || (s[0] != '+' && s[0] != '-')) return false;
  int hh = 0, mm = 0;
  if (!parse_int(s.substr(1, 2), hh) || !parse_int(s.substr(3, 2), mm) || mm > 59) return false;
  minutes = (hh * 60 + mm) * (s[0] == '-' ? -1 : 1);
  return true;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::optional<std::int64_t> parse_iso_like(std::string_view s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0, mo = 0, d = 0;
  if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), mo) || !parse_int(s.substr(8, 2), d)) {
    return std::nullopt;
  }
  if (s.size() == 10) return to_epoch(y, mo, d, 0, 0, 0, 0);
  if (s[10] != ' ' && s[10] != 'T') return std::nullopt;
  auto rest = s.substr(11);
  int offset = 0;
  if (rest.ends_with('Z')) rest.remove_suffix(1);
  else if (rest.size() > 6 && (rest[rest.size() - 6] == '+' || rest[rest.size() - 6] == '-')) {
    // +HH:MM suffix
    std::string off(rest.substr(rest.size() - 6));
    off.erase(3, 1);
    if (!parse_offset(off, offset)) return std::nullopt;
    rest.remove_suffix(6);
  }
  int h = 0, mi = 0, sec = 0;
  if (!parse_clock(rest, h, mi, sec)) return std::nullopt;
  return to_epoch(y, mo, d, h, mi, sec, offset);
}

std::optional<std::int64_t> parse_textual(std::string_view s) {
  auto parts = split_spaces(s);
  if (parts.empty()) return std::nullopt;
  // Optional weekday, with or without trailing comma.
  if (parts[0].size() >= 3 && month_from_name(parts[0]) == 0 && !std::isdigit(static_cast<unsigned char>(parts[0][0]))) {
    parts.erase(parts.begin());
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, offset = 0;
  if (parts.size() == 5 && month_from_name(parts[0]) != 0) {
    // Twitter: Oct 10 20:19:24 +0000 2018
    mo = month_from_name(parts[0]);
    if (!parse_int(parts[1], d) || !parse_clock(parts[2], h, mi, sec) || !parse_offset(parts[3], offset) ||
        !parse_int(parts[4], y)) {
      return std::nullopt;
    }
    return to_epoch(y, mo, d, h, mi, sec, offset);
  }
  if (parts.size() == 5 && month_from_name(parts[1]) != 0) {
    // RFC 2822: 10 Oct 2018 20:19:24 +0000
    mo = month_from_name(parts[1]);
    if (!parse_int(parts[0], d) || !parse_int(parts[2], y) || !parse_clock(parts[3], h, mi, sec) ||
        !parse_offset(parts[4], offset)) {
      return std::nullopt;
    }
    return to_epoch(y, mo, d, h, mi, sec, offset);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (s.empty()) return 0;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  double d = 0;
  auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc{} && dptr == s.data() + s.size() && std::isfinite(d) && d >= 0 && d < 1.8e19) {
    return static_cast<std::uint64_t>(d);
  }
  return std::nullopt;
}

bool parse_flag(std::string_view s) {
  const auto lower = text::ascii_lower(s);
  return lower == "true" || lower == "1" || lower == "t" || lower == "yes";
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file " + path.string());
  return in;
}

constexpr std::array<std::string_view, 13> kRequiredColumns = {
    "userid", "user_screen_name", "user_profile_description", "account_creation_date",
    "account_language", "follower_count", "following_count", "tweetid", "tweet_text",
    "tweet_time", "tweet_client_name", "tweet_language", "is_retweet"};

std::string json_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  return {};
}

std::uint64_t json_count(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) return 0;
  if (it->is_number_float()) return static_cast<std::uint64_t>(std::max(0.0, it->get<double>()));
  if (it->is_number_integer() && it->get<std::int64_t>() < 0) return 0;
  return it->get<std::uint64_t>();
}

std::string sample_text(const json& tweet) {
  if (auto ext = tweet.find("extended_tweet"); ext != tweet.end() && ext->is_object()) {
    auto full = json_string(*ext, "full_text");
    if (!full.empty()) return full;
  }
  auto full = json_string(tweet, "full_text");
  if (!full.empty()) return full;
  return json_string(tweet, "text");
}

json account_to_json(const Account& a, Label label) {
  json tweets = json::array();
  for (const auto& t : a.tweets) {
    tweets.push_back({{"tweet_id", t.tweet_id},
                      {"text", t.text},
                      {"timestamp", t.timestamp},
                      {"client_name", t.client_name},
                      {"is_retweet", t.is_retweet},
                      {"language", t.language}});
  }
  return {{"account_id", a.account_id},
          {"screen_name", a.screen_name},
          {"description", a.description},
          {"account_language", a.account_language},
          {"description_language", a.description_language},
          {"followers", a.followers},
          {"following", a.following},
          {"creation_time", a.creation_time},
          {"campaign", a.campaign},
          {"label", to_string(label)},
          {"tweets", std::move(tweets)}};
}

Account account_from_json(const json& j) {
  Account a;
  a.account_id = j.at("account_id").get<std::string>();
  a.screen_name = j.value("screen_name", "");
  a.description = j.value("description", "");
  a.account_language = j.value("account_language", "");
  a.description_language = j.value("description_language", "");
  a.followers = j.value("followers", std::uint64_t{0});
  a.following = j.value("following", std::uint64_t{0});
  a.creation_time = j.value("creation_time", std::int64_t{0});
  a.campaign = j.value("campaign", "");
  for (const auto& tj : j.at("tweets")) {
    Tweet t;
    t.tweet_id = tj.at("tweet_id").get<std::string>();
    t.account_id = a.account_id;
    t.text = tj.value("text", "");
    t.timestamp = tj.at("timestamp").get<std::int64_t>();
    t.client_name = tj.value("client_name", "");
    t.is_retweet = tj.value("is_retweet", false);
    t.language = tj.value("language", "");
    if (t.timestamp < 0) throw DataError("negative timestamp in tweet " + t.tweet_id);
    a.tweets.push_back(std::move(t));
  }
  return a;
}

}  // namespace

std::string decode_client_name(std::string_view raw) {
  if (!raw.starts_with("<a") || raw.size() < 7 || !raw.ends_with("</a>")) return std::string(raw);
  if (raw[2] != ' ' && raw[2] != '>') return std::string(raw);
  const auto close = raw.find('>');
  if (close == std::string_view::npos || close + 5 > raw.size()) return std::string(raw);
  const auto inner = raw.substr(close + 1, raw.size() - 4 - (close + 1));
  return decode_entities(inner);
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (std::isdigit(static_cast<unsigned char>(text[0])) && text.size() >= 10 && text[4] == '-') {
    return parse_iso_like(text);
  }
  return parse_textual(text);
}

bool is_retweet(bool flag, std::string_view text) { return flag || text.starts_with("RT @"); }

void AccountAccumulator::add(const Account& metadata, Tweet tweet) {
  auto it = accounts_.find(metadata.account_id);
  if (it == accounts_.end()) {
    Account a = metadata;
    a.tweets.clear();
    it = accounts_.emplace(a.account_id, std::move(a)).first;
  }
  tweet.account_id = metadata.account_id;
  it->second.tweets.push_back(std::move(tweet));
}

void AccountAccumulator::add_account(Account account) {
  auto it = accounts_.find(account.account_id);
  if (it == accounts_.end()) {
    accounts_.emplace(account.account_id, std::move(account));
    return;
  }
  auto& tweets = it->second.tweets;
  tweets.insert(tweets.end(), std::make_move_iterator(account.tweets.begin()),
                std::make_move_iterator(account.tweets.end()));
}

void AccountAccumulator::merge(AccountAccumulator&& other) {
  for (auto& [id, account] : other.accounts_) add_account(std::move(account));
  other.accounts_.clear();
}

std::vector<Account> AccountAccumulator::finish() && {
  std::vector<Account> out;
  out.reserve(accounts_.size());
  for (auto& [id, account] : accounts_) {
    std::stable_sort(account.tweets.begin(), account.tweets.end(), [](const Tweet& a, const Tweet& b) {
      if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
      return a.tweet_id < b.tweet_id;
    });
    out.push_back(std::move(account));
  }
  accounts_.clear();
  return out;
}

Corpus parse_campaign_csv(std::istream& in, Label label, const std::string& campaign,
                          const std::string& source_path) {
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header) || (header.size() == 1 && header[0].empty())) {
    throw EmptyCorpusError("empty CSV file " + source_path);
  }
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(header[i], i);
  std::array<std::size_t, kRequiredColumns.size()> idx{};
  for (std::size_t i = 0; i < kRequiredColumns.size(); ++i) {
    auto it = column.find(std::string(kRequiredColumns[i]));
    if (it == column.end()) {
      throw SchemaError("missing required column '" + std::string(kRequiredColumns[i]) + "' in " + source_path);
    }
    idx[i] = it->second;
  }
  const auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto campaign_col = optional_column("campaign");
  const auto desc_lang_col = optional_column("description_language");

  enum : std::size_t { kUser, kScreen, kDesc, kCreated, kLang, kFollowers, kFollowing,
                       kTweetId, kText, kTime, kClient, kTweetLang, kRetweet };

  Corpus corpus;
  corpus.label = label;
  corpus.source_path = source_path;
  AccountAccumulator acc;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    const auto field = [&](std::size_t col) -> const std::string& {
      static const std::string kEmpty;
      return col < row.size() ? row[col] : kEmpty;
    };
    const auto ts = parse_timestamp(field(idx[kTime]));
    const auto created = parse_timestamp(field(idx[kCreated]));
    const auto followers = parse_count(field(idx[kFollowers]));
    const auto following = parse_count(field(idx[kFollowing]));
    if (!ts || !created || !followers || !following || field(idx[kUser]).empty()) {
      ++corpus.skipped_rows;
      continue;
    }
    Account meta;
    meta.account_id = field(idx[kUser]);
    meta.screen_name = field(idx[kScreen]);
    meta.description = field(idx[kDesc]);
    meta.account_language = field(idx[kLang]);
    meta.description_language = desc_lang_col ? field(*desc_lang_col) : std::string{};
    meta.followers = *followers;
    meta.following = *following;
    meta.creation_time = *created;
    meta.campaign = !campaign.empty() ? campaign : (campaign_col ? field(*campaign_col) : std::string{});

    Tweet t;
    t.tweet_id = field(idx[kTweetId]);
    t.text = field(idx[kText]);
    t.timestamp = *ts;
    t.client_name = decode_client_name(field(idx[kClient]));
    t.is_retweet = is_retweet(parse_flag(field(idx[kRetweet])), t.text);
    t.language = field(idx[kTweetLang]);
    acc.add(meta, std::move(t));
  }
  if (acc.size() == 0) throw EmptyCorpusError("no valid rows in " + source_path);
  corpus.accounts = std::move(acc).finish();
  return corpus;
}

Corpus parse_campaign_csv(const std::filesystem::path& path, Label label, const std::string& campaign) {
  auto in = open_input(path);
  return parse_campaign_csv(in, label, campaign, path.string());
}

Corpus parse_sample_jsonl(std::istream& in, Label label, const std::string& source_path) {
  Corpus corpus;
  corpus.label = label;
  corpus.source_path = source_path;
  AccountAccumulator acc;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json tweet = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (tweet.is_discarded() || !tweet.is_object()) {
      ++corpus.skipped_rows;
      continue;
    }
    auto user_it = tweet.find("user");
    if (user_it == tweet.end() || !user_it->is_object()) {
      ++corpus.skipped_rows;
      continue;
    }
    const json& user = *user_it;
    const auto ts = parse_timestamp(json_string(tweet, "created_at"));
    const auto created = parse_timestamp(json_string(user, "created_at"));
    Account meta;
    meta.account_id = json_string(user, "id_str");
    if (meta.account_id.empty()) meta.account_id = json_string(user, "id");
    Tweet t;
    t.tweet_id = json_string(tweet, "id_str");
    if (t.tweet_id.empty()) t.tweet_id = json_string(tweet, "id");
    if (!ts || meta.account_id.empty() || t.tweet_id.empty()) {
      ++corpus.skipped_rows;
      continue;
    }
    meta.screen_name = json_string(user, "screen_name");
    meta.description = json_string(user, "description");
    meta.account_language = json_string(user, "lang");
    meta.followers = json_count(user, "followers_count");
    meta.following = json_count(user, "friends_count");
    meta.creation_time = created.value_or(0);

    t.text = sample_text(tweet);
    t.timestamp = *ts;
    t.client_name = decode_client_name(json_string(tweet, "source"));
    const bool flagged = tweet.contains("retweeted_status") && tweet["retweeted_status"].is_object();
    t.is_retweet = is_retweet(flagged, t.text);
    t.language = json_string(tweet, "lang");
    acc.add(meta, std::move(t));
  }
  if (acc.size() == 0) throw EmptyCorpusError("no valid lines in " + source_path);
  corpus.accounts = std::move(acc).finish();
  return corpus;
}

Corpus parse_sample_jsonl(const std::filesystem::path& path, Label label) {
  auto in = open_input(path);
  return parse_sample_jsonl(in, label, path.string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& account : corpus.accounts) {
    out << account_to_json(account, corpus.label).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_corpus(corpus, out);
}

Corpus read_corpus(std::istream& in, std::optional<Label> label, const std::string& source_path) {
  Corpus corpus;
  corpus.source_path = source_path;
  corpus.label = label.value_or(Label::unlabeled);
  bool label_seen = label.has_value();
  AccountAccumulator acc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!label_seen) {
        corpus.label = parse_label(j.value("label", "unlabeled"));
        label_seen = true;
      }
      acc.add_account(account_from_json(j));
    } catch (const json::exception& e) {
      throw DataError(source_path + ":" + std::to_string(line_no) + ": malformed account record: " + e.what());
    }
  }
  if (acc.size() == 0) throw EmptyCorpusError("no accounts in " + source_path);
  corpus.accounts = std::move(acc).finish();
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, std::optional<Label> label) {
  auto in = open_input(path);
  return read_corpus(in, label, path.string());
}

}  // namespace trollscope::ingest
