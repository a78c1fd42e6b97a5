#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scriptmix/corpus.hpp"
#include "scriptmix/translit.hpp"

namespace scriptmix {

// Ranked character n-gram signature of one language condition. N-grams are
// 1..3 characters drawn from `_`-padded tokens of normalized text.
struct LanguageProfile {
  Lang language = Lang::ENG;
  std::vector<std::string> ngrams;  // rank r = index + 1
  std::unordered_map<std::string, int> rank;
  std::size_t total_ngrams_seen = 0;
  std::size_t k = 0;
  std::string version;
};

// n-gram -> count map used by both profile building and detection.
std::unordered_map<std::string, std::size_t> count_ngrams(std::string_view normalized_text);

// Top-K n-grams by frequency, ties broken lexicographically. Requires at
// least 100 code points of combined text.
LanguageProfile build_profile(const std::vector<std::string>& texts, Lang lang, std::size_t k);

struct DetectionResult {
  std::vector<std::pair<Lang, double>> candidates;  // ascending by score
  double margin = 0;                                // top-2 score minus top-1 score
  Lang top() const { return candidates.front().first; }
};

// Cavnar–Trenkle out-of-place rank distance. Requires text >= 20 code points
// after normalization and at least two profiles.
DetectionResult detect_language(std::string_view text, const std::vector<LanguageProfile>& profiles);

// Out-of-place distance between a text's rank list and one profile; absent
// n-grams cost the profile size K.
double out_of_place_distance(const std::vector<std::string>& text_ngrams,
                             const LanguageProfile& profile);

// Pull-based document stream; next() returns nullopt at end of stream.
class DocumentStream {
 public:
  virtual ~DocumentStream() = default;
  virtual std::optional<std::string> next() = 0;
};

class VectorStream : public DocumentStream {
 public:
  explicit VectorStream(std::vector<std::string> docs) : docs_(std::move(docs)) {}
  std::optional<std::string> next() override {
    if (pos_ >= docs_.size()) return std::nullopt;
    return docs_[pos_++];
  }

 private:
  std::vector<std::string> docs_;
  std::size_t pos_ = 0;
};

// Reads one document per line; gzip-compressed files are decompressed
// transparently.
class LineFileStream : public DocumentStream {
 public:
  explicit LineFileStream(const std::filesystem::path& path);
  ~LineFileStream() override;
  LineFileStream(LineFileStream&&) noexcept;
  LineFileStream& operator=(LineFileStream&&) noexcept;
  std::optional<std::string> next() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct MineOptions {
  double min_margin = 0;
  std::size_t min_length = 20;  // normalized code points
  std::size_t max_docs = 0;     // 0 = unlimited
};

struct MineStats {
  std::size_t scanned = 0;
  std::size_t retained = 0;
  std::size_t rejected_short = 0;
  std::size_t rejected_language = 0;
  std::size_t rejected_margin = 0;
};

// Retains stream documents whose top-1 detection is `target` with margin and
// length above the thresholds, in stream order, stopping after max_docs.
AdaptationCorpus mine_organic(DocumentStream& stream, Lang target,
                              const std::vector<LanguageProfile>& profiles,
                              const MineOptions& options, std::uint64_t seed,
                              MineStats* stats = nullptr);

void save_profile(const LanguageProfile& profile, const std::filesystem::path& path);
LanguageProfile load_profile(const std::filesystem::path& path);

}  // namespace scriptmix
