#include "scriptmix/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "scriptmix/errors.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

using nlohmann::json;

namespace {

constexpr char32_t kPad = U'_';

// Ranks counted n-grams by (count desc, gram asc) and returns the top k.
std::vector<std::string> rank_ngrams(const std::unordered_map<std::string, std::size_t>& counts,
                                     std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > k) items.resize(k);
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [gram, count] : items) out.push_back(std::move(gram));
  return out;
}

}  // namespace

std::unordered_map<std::string, std::size_t> count_ngrams(std::string_view normalized_text) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const std::string& token : split_whitespace(normalized_text)) {
    std::vector<char32_t> padded;
    padded.reserve(token.size() + 2);
    padded.push_back(kPad);
    for (char32_t cp : decode_utf8(token)) padded.push_back(cp);
    padded.push_back(kPad);
    for (std::size_t n = 1; n <= 3; ++n) {
      if (padded.size() < n) continue;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        std::string gram;
        for (std::size_t j = 0; j < n; ++j) append_utf8(gram, padded[i + j]);
        ++counts[gram];
      }
    }
  }
  return counts;
}

LanguageProfile build_profile(const std::vector<std::string>& texts, Lang lang, std::size_t k) {
  std::unordered_map<std::string, std::size_t> counts;
  std::size_t total_cps = 0;
  std::size_t total_ngrams = 0;
  for (const auto& text : texts) {
    const std::string normalized = normalize_text(text);
    total_cps += count_code_points(normalized);
    for (const auto& [gram, count] : count_ngrams(normalized)) {
      counts[gram] += count;
      total_ngrams += count;
    }
  }
  if (total_cps < 100)
    throw DataError("build_profile: need at least 100 code points of text for " +
                    std::string(lang_code(lang)));

  LanguageProfile profile;
  profile.language = lang;
  profile.k = k;
  profile.total_ngrams_seen = total_ngrams;
  profile.version = "ct13-k" + std::to_string(k) + "/1";
  profile.ngrams = rank_ngrams(counts, k);
  profile.rank.reserve(profile.ngrams.size());
  for (std::size_t i = 0; i < profile.ngrams.size(); ++i)
    profile.rank[profile.ngrams[i]] = static_cast<int>(i) + 1;
  return profile;
}

double out_of_place_distance(const std::vector<std::string>& text_ngrams,
                             const LanguageProfile& profile) {
  double distance = 0;
  const auto k = static_cast<double>(profile.k);
  for (std::size_t i = 0; i < text_ngrams.size(); ++i) {
    const auto it = profile.rank.find(text_ngrams[i]);
    if (it == profile.rank.end()) {
      distance += k;
    } else {
      const auto text_rank = static_cast<double>(i + 1);
      distance += std::abs(text_rank - static_cast<double>(it->second));
    }
  }
  return distance;
}

DetectionResult detect_language(std::string_view text,
                                const std::vector<LanguageProfile>& profiles) {
  if (profiles.size() < 2) throw ConfigError("detect_language: need at least 2 profiles");
  const std::string normalized = normalize_text(text);
  if (count_code_points(normalized) < 20) throw DataError("detect_language: text too short");

  std::size_t k = 0;
  for (const auto& p : profiles) k = std::max(k, p.k);
  const auto text_ngrams = rank_ngrams(count_ngrams(normalized), k);

  DetectionResult result;
  result.candidates.reserve(profiles.size());
  for (const auto& profile : profiles)
    result.candidates.emplace_back(profile.language, out_of_place_distance(text_ngrams, profile));
  std::sort(result.candidates.begin(), result.candidates.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return lang_code(a.first) < lang_code(b.first);
  });
  result.margin = result.candidates[1].second - result.candidates[0].second;
  return result;
}

// gzopen reads plain files as-is and inflates gzip members, which covers the
// "optionally compressed" stream contract with a single code path.
struct LineFileStream::Impl {
  gzFile file = nullptr;
  ~Impl() {
    if (file) gzclose(file);
  }
};

LineFileStream::LineFileStream(const std::filesystem::path& path) : impl_(new Impl) {
  impl_->file = gzopen(path.c_str(), "rb");
  if (!impl_->file) throw DataError("cannot open document stream: " + path.string());
}

LineFileStream::~LineFileStream() = default;
LineFileStream::LineFileStream(LineFileStream&&) noexcept = default;
LineFileStream& LineFileStream::operator=(LineFileStream&&) noexcept = default;

std::optional<std::string> LineFileStream::next() {
  std::string line;
  char buf[4096];
  for (;;) {
    line.clear();
    bool saw_newline = false;
    while (!saw_newline) {
      if (gzgets(impl_->file, buf, sizeof(buf)) == nullptr) {
        if (line.empty()) return std::nullopt;
        break;
      }
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        saw_newline = true;
      }
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
    if (!saw_newline) return std::nullopt;  // trailing empty fragment at EOF
  }
}

AdaptationCorpus mine_organic(DocumentStream& stream, Lang target,
                              const std::vector<LanguageProfile>& profiles,
                              const MineOptions& options, std::uint64_t seed, MineStats* stats) {
  if (options.min_margin < 0) throw ConfigError("mine_organic: min_margin must be non-negative");
  AdaptationCorpus corpus;
  corpus.provenance = Provenance::ORGANIC;
  corpus.seed = seed;
  MineStats local;
  const std::string tag = "mined:" + std::string(lang_code(target));

  while (auto doc = stream.next()) {
    if (options.max_docs > 0 && corpus.documents.size() >= options.max_docs) break;
    ++local.scanned;
    const std::string normalized = normalize_text(*doc);
    if (count_code_points(normalized) < std::max<std::size_t>(options.min_length, 20)) {
      ++local.rejected_short;
      continue;
    }
    const DetectionResult detection = detect_language(*doc, profiles);
    if (detection.top() != target) {
      ++local.rejected_language;
      continue;
    }
    if (detection.margin < options.min_margin) {
      ++local.rejected_margin;
      continue;
    }
    corpus.documents.push_back({*doc, tag, false});
    ++local.retained;
  }

  mark_partition(corpus, 0.05, substream_seed(seed, "partition/organic/" +
                                                        std::string(lang_code(target))));
  if (stats) *stats = local;
  return corpus;
}

void save_profile(const LanguageProfile& profile, const std::filesystem::path& path) {
  json j = {
      {"format", "scriptmix.profile/1"},
      {"language", lang_code(profile.language)},
      {"k", profile.k},
      {"version", profile.version},
      {"total_ngrams_seen", profile.total_ngrams_seen},
      {"ngrams", profile.ngrams},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write profile: " + path.string());
  out << j.dump(2) << "\n";
}

LanguageProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open profile: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("corrupt profile " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "scriptmix.profile/1")
    throw DataError("unsupported profile format in " + path.string());
  LanguageProfile profile;
  profile.language = parse_lang(j.at("language").get<std::string>());
  profile.k = j.at("k").get<std::size_t>();
  profile.version = j.at("version").get<std::string>();
  profile.total_ngrams_seen = j.at("total_ngrams_seen").get<std::size_t>();
  profile.ngrams = j.at("ngrams").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < profile.ngrams.size(); ++i)
    profile.rank[profile.ngrams[i]] = static_cast<int>(i) + 1;
  return profile;
}

}  // namespace scriptmix
