#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"

#include "trollscope/error.hpp"
#include "trollscope/eval.hpp"
#include "trollscope/ingest.hpp"
#include "trollscope/source_intel.hpp"
#include "trollscope/util/rng.hpp"

namespace trollscope::eval {
namespace {

using nlohmann::json;

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kEndTime = 1538352000;  // 2018-10-01T00:00:00Z
constexpr std::int64_t kActiveSpan = 365 * kDay;

const std::vector<std::string>& function_pool() {
  static const std::vector<std::string> words = {
      "the", "a", "an", "and", "but", "or", "of", "to", "in", "on", "for", "with", "at", "by", "from",
      "is", "are", "was", "were", "be", "have", "has", "will", "would", "can", "should", "this", "that",
      "it", "they", "we", "you", "he", "she", "our", "their", "not", "no", "all", "some", "about", "after"};
  return words;
}

const std::vector<std::string>& content_pool() {
  static const std::vector<std::string> words = {
      "news",       "people",    "government", "election",  "vote",      "media",     "country",
      "president",  "police",    "city",       "school",    "money",     "economy",   "market",
      "freedom",    "truth",     "story",      "video",     "report",    "week",      "today",
      "tomorrow",   "morning",   "night",      "family",    "friends",   "music",     "game",
      "team",       "season",    "coffee",     "weather",   "summer",    "winter",    "movie",
      "book",       "history",   "future",     "war",       "peace",     "border",    "taxes",
      "healthcare", "jobs",      "workers",    "protest",   "rally",     "speech",    "debate",
      "scandal",    "corruption", "leaders",   "citizens",  "community", "church",    "street",
      "america",    "europe",    "world",      "crisis",    "attack",    "support",   "change",
      "believe",    "think",     "know",       "want",      "need",      "love",      "hate",
      "watch",      "read",      "share",      "follow",    "listen",    "stop",      "start",
      "great",      "terrible",  "amazing",    "real",      "fake",      "big",       "small",
      "new",        "old",       "free",       "strong",    "important", "beautiful", "wrong",
      "right",      "happy",     "angry",      "ready",     "breaking",  "official",  "local",
      "national",   "dinner",    "weekend",    "holiday",   "garden",    "project",   "photo",
      "update",     "question",  "answer",     "problem",   "idea",      "plan",      "power"};
  return words;
}

std::vector<std::string> fake_clients(const sources::SourceCatalog& catalog) {
  std::vector<std::string> out(catalog.known_fakes().begin(), catalog.known_fakes().end());
  for (const char* name : {"Twitter for  Android", " Twitter for iOS", "  HTC Peep", "hootsuite",
                           "Twitter for iphone", "TweetDeck "}) {
    out.emplace_back(name);
  }
  return out;
}

struct Clients {
  std::vector<std::string> regular, scheduling, fake;
};

const Clients& clients() {
  static const Clients c = [] {
    const auto& cat = sources::SourceCatalog::defaults();
    return Clients{{cat.regular().begin(), cat.regular().end()},
                   {cat.scheduling().begin(), cat.scheduling().end()},
                   fake_clients(cat)};
  }();
  return c;
}

std::uint64_t at_least(std::uint64_t v, std::uint64_t lo) { return std::max(v, lo); }

std::string sentence(Rng& rng, std::size_t words) {
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    const auto& pool = rng.bernoulli(0.4) ? function_pool() : content_pool();
    std::string w = rng.pick(pool);
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    if (!s.empty()) s += ' ';
    s += w;
    if (i + 1 < words && rng.bernoulli(0.06)) s += ',';
  }
  const double u = rng.uniform();
  s += u < 0.7 ? "." : (u < 0.85 ? "!" : "?");
  return s;
}

std::string body_text(Rng& rng, double words_per_tweet) {
  std::size_t remaining = at_least(rng.poisson(words_per_tweet), 3);
  std::string text;
  while (remaining > 0) {
    const std::size_t len = std::min<std::size_t>(remaining, 4 + rng.below(9));
    if (!text.empty()) text += ' ';
    text += sentence(rng, len);
    remaining -= len;
  }
  if (rng.bernoulli(0.15)) text += " #" + rng.pick(content_pool());
  if (rng.bernoulli(0.1)) text += " https://t.co/" + std::to_string(rng.below(1000000000));
  return text;
}

std::string handle(Rng& rng) { return "@user" + std::to_string(rng.below(5000)); }

Account make_account(const BehaviorProfile& p, const std::vector<std::string>& pool, std::size_t index,
                     const std::string& id, const std::string& campaign, std::uint64_t seed) {
  Rng rng(derive_seed(seed, index));
  const auto& c = clients();
  Account a;
  a.account_id = id;
  a.screen_name = "user_" + id;
  a.campaign = campaign;
  a.account_language = rng.pick(p.languages);
  a.description_language = a.account_language;
  const std::size_t desc_words = rng.poisson(p.description_words);
  for (std::size_t i = 0; i < desc_words; ++i) {
    if (i) a.description += ' ';
    a.description += rng.pick(rng.bernoulli(0.3) ? function_pool() : content_pool());
  }
  a.followers = static_cast<std::uint64_t>(std::llround(p.followers_mean * rng.uniform(0.25, 1.75)));
  a.following = static_cast<std::uint64_t>(std::llround(p.following_mean * rng.uniform(0.25, 1.75)));
  const auto age_days = std::max<std::int64_t>(
      2, static_cast<std::int64_t>(std::llround(p.account_age_days_mean * rng.uniform(0.2, 1.8))));
  a.creation_time = kEndTime - age_days * kDay + static_cast<std::int64_t>(rng.below(kDay));
  const std::int64_t start = std::max(a.creation_time + kDay, kEndTime - kActiveSpan);
  const auto days = static_cast<std::uint64_t>(std::max<std::int64_t>((kEndTime - start) / kDay, 1));

  const std::size_t n_tweets = at_least(rng.poisson(p.tweets_per_account), 1);
  for (std::size_t t = 0; t < n_tweets; ++t) {
    Tweet tw;
    tw.account_id = id;
    tw.tweet_id = id + "_" + std::to_string(t);
    const int hour = rng.bernoulli(p.hour_concentration)
                         ? (p.office_start_hour + static_cast<int>(rng.below(8))) % 24
                         : static_cast<int>(rng.below(24));
    const std::int64_t day_start = start - start % kDay + static_cast<std::int64_t>(rng.below(days)) * kDay;
    tw.timestamp = day_start + hour * 3600 + static_cast<std::int64_t>(rng.below(3600));

    const double u = rng.uniform();
    if (u < p.scheduled_fraction) tw.client_name = rng.pick(c.scheduling);
    else if (u < p.scheduled_fraction + p.fake_source_fraction) tw.client_name = rng.pick(c.fake);
    else tw.client_name = rng.pick(c.regular);

    tw.is_retweet = rng.bernoulli(p.retweet_fraction);
    std::string text = tw.is_retweet ? rng.pick(pool) : body_text(rng, p.words_per_tweet);
    const std::size_t mentions = rng.poisson(p.mention_rate);
    for (std::size_t m = 0; m < mentions; ++m) {
      text = rng.bernoulli(0.5) ? handle(rng) + " " + text : text + " " + handle(rng);
    }
    tw.text = std::move(text);
    tw.language = rng.pick(p.languages);
    a.tweets.push_back(std::move(tw));
  }
  std::stable_sort(a.tweets.begin(), a.tweets.end(), [](const Tweet& x, const Tweet& y) {
    return x.timestamp != y.timestamp ? x.timestamp < y.timestamp : x.tweet_id < y.tweet_id;
  });
  return a;
}

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DataError(std::string(name) + " must lie in [0, 1]");
}

void validate(const BehaviorProfile& p) {
  check_fraction(p.scheduled_fraction, "scheduled_fraction");
  check_fraction(p.fake_source_fraction, "fake_source_fraction");
  check_fraction(p.retweet_fraction, "retweet_fraction");
  check_fraction(p.hour_concentration, "hour_concentration");
  if (p.scheduled_fraction + p.fake_source_fraction > 1.0 + 1e-12) {
    throw DataError("scheduled_fraction + fake_source_fraction exceeds 1");
  }
  if (p.copypasta_pool < 1) throw DataError("copypasta_pool must be at least 1");
  if (p.office_start_hour < 0 || p.office_start_hour > 23) throw DataError("office_start_hour must be 0-23");
  for (double v : {p.tweets_per_account, p.mention_rate, p.words_per_tweet, p.followers_mean, p.following_mean,
                   p.account_age_days_mean, p.description_words}) {
    if (!(v >= 0.0 && v < 1e6)) throw DataError("profile rates must be finite and non-negative");
  }
  if (p.languages.empty()) throw DataError("profile needs at least one language");
}

json profile_json(const BehaviorProfile& p) {
  return {{"tweets_per_account", p.tweets_per_account},
          {"scheduled_fraction", p.scheduled_fraction},
          {"fake_source_fraction", p.fake_source_fraction},
          {"retweet_fraction", p.retweet_fraction},
          {"copypasta_pool", p.copypasta_pool},
          {"hour_concentration", p.hour_concentration},
          {"office_start_hour", p.office_start_hour},
          {"mention_rate", p.mention_rate},
          {"words_per_tweet", p.words_per_tweet},
          {"followers_mean", p.followers_mean},
          {"following_mean", p.following_mean},
          {"account_age_days_mean", p.account_age_days_mean},
          {"description_words", p.description_words},
          {"languages", p.languages}};
}

void apply_profile(const json& j, BehaviorProfile& p) {
  if (!j.is_object()) throw DataError("profile must be a JSON object");
  const auto known = profile_json(p);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw DataError("unknown profile field '" + key + "'");
  }
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("tweets_per_account", p.tweets_per_account);
  get("scheduled_fraction", p.scheduled_fraction);
  get("fake_source_fraction", p.fake_source_fraction);
  get("retweet_fraction", p.retweet_fraction);
  get("copypasta_pool", p.copypasta_pool);
  get("hour_concentration", p.hour_concentration);
  get("office_start_hour", p.office_start_hour);
  get("mention_rate", p.mention_rate);
  get("words_per_tweet", p.words_per_tweet);
  get("followers_mean", p.followers_mean);
  get("following_mean", p.following_mean);
  get("account_age_days_mean", p.account_age_days_mean);
  get("description_words", p.description_words);
  get("languages", p.languages);
}

}  // namespace

BehaviorProfile default_troll_profile() {
  BehaviorProfile p;
  p.tweets_per_account = 40;
  p.scheduled_fraction = 0.3;
  p.fake_source_fraction = 0.2;
  p.retweet_fraction = 0.55;
  p.copypasta_pool = 150;
  p.hour_concentration = 0.85;
  p.office_start_hour = 6;
  p.mention_rate = 1.2;
  p.words_per_tweet = 11;
  p.followers_mean = 1500;
  p.following_mean = 1200;
  p.account_age_days_mean = 700;
  p.description_words = 6;
  p.languages = {"en", "ru"};
  return p;
}

BehaviorProfile default_benign_profile() {
  BehaviorProfile p;
  p.tweets_per_account = 40;
  p.scheduled_fraction = 0.0;
  p.fake_source_fraction = 0.0;
  p.retweet_fraction = 0.25;
  p.copypasta_pool = 1000;
  p.hour_concentration = 0.0;
  p.office_start_hour = 9;
  p.mention_rate = 0.4;
  p.words_per_tweet = 15;
  p.followers_mean = 800;
  p.following_mean = 600;
  p.account_age_days_mean = 1500;
  p.description_words = 10;
  p.languages = {"en"};
  return p;
}

void validate(const SynthConfig& config) {
  if (config.n_troll < 1 || config.n_benign < 1) throw DataError("n_troll and n_benign must be at least 1");
  validate(config.troll);
  validate(config.benign);
}

SynthConfig synth_config_from_json(std::string_view text) {
  SynthConfig c;
  try {
    const auto j = json::parse(text);
    if (!j.is_object()) throw DataError("synth config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "n_troll") value.get_to(c.n_troll);
      else if (key == "n_benign") value.get_to(c.n_benign);
      else if (key == "seed") value.get_to(c.seed);
      else if (key == "campaign") value.get_to(c.campaign);
      else if (key == "troll") apply_profile(value, c.troll);
      else if (key == "benign") apply_profile(value, c.benign);
      else throw DataError("unknown synth config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("bad synth config: ") + e.what());
  }
  validate(c);
  return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
  const json j = {{"n_troll", c.n_troll},   {"n_benign", c.n_benign},          {"seed", c.seed},
                  {"campaign", c.campaign}, {"troll", profile_json(c.troll)}, {"benign", profile_json(c.benign)}};
  return j.dump(2) + "\n";
}

Corpus synth_corpus(const BehaviorProfile& profile, std::size_t n, Label label, const std::string& campaign,
                    const std::string& id_prefix, std::uint64_t seed) {
  validate(profile);
  if (n < 1) throw DataError("corpus size must be at least 1");
  Rng pool_rng(derive_seed(seed, 0xC0FFEE));
  std::vector<std::string> pool(profile.copypasta_pool);
  for (auto& text : pool) text = body_text(pool_rng, profile.words_per_tweet);

  Corpus corpus;
  corpus.label = label;
  corpus.source_path = campaign;
  corpus.accounts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    corpus.accounts[i] = make_account(profile, pool, i, id_prefix + std::to_string(i), campaign, seed);
  }
  std::sort(corpus.accounts.begin(), corpus.accounts.end(),
            [](const Account& a, const Account& b) { return a.account_id < b.account_id; });
  return corpus;
}

SynthCorpora synth_generate(const SynthConfig& config) {
  validate(config);
  const auto tag = std::to_string(config.seed) + "_";
  SynthCorpora out;
  out.trolls = synth_corpus(config.troll, config.n_troll, Label::troll, config.campaign, "t" + tag,
                            derive_seed(config.seed, 1));
  out.benign =
      synth_corpus(config.benign, config.n_benign, Label::benign, "", "b" + tag, derive_seed(config.seed, 2));
  out.benign.source_path = "benign";
  return out;
}

}  // namespace trollscope::eval
