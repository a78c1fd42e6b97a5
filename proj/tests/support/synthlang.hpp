#pragma once

// Deterministic synthetic-language fixtures: per-condition lexicons, labelled
// datasets with controllable script-switching, abstracts and raw streams.
// Shared by the test suites and the make_fixtures tool.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scriptmix/corpus.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/translit.hpp"

namespace scriptmix::synth {

struct SynthLang {
  Lang lang = Lang::ENG;
  std::vector<std::string> words;         // content lexicon, native script
  std::vector<std::string> signal_words;  // words marking HOMO documents
  std::vector<std::string> trans_words;   // words marking TRANS documents
};

// Native-script word of 2-4 syllables.
std::string make_word(Script script, SplitMix64& rng);

// Deterministic lexicon; distinct seeds separate languages sharing a script.
SynthLang make_lang(Lang lang, std::uint64_t seed, std::size_t lexicon_size = 140);

std::string make_sentence(const std::vector<std::string>& words, SplitMix64& rng,
                          std::size_t min_words, std::size_t max_words);

struct DatasetSpec {
  std::size_t n = 400;
  double p_homo = 0.2;
  double p_trans = 0.1;     // ignored for binary conditions
  double switch_frac = 0;   // fraction of documents rendered in Latin script
  std::size_t min_words = 4;
  std::size_t max_words = 9;
};

std::vector<LabeledExample> make_dataset(const SynthLang& lang, const DatasetSpec& spec,
                                         std::uint64_t seed, const Transliterator& translit);

std::vector<std::string> make_abstracts(const SynthLang& lang, std::size_t n, std::uint64_t seed);

// Unlabelled stream mixing all given languages; switch_frac of the documents
// from non-Latin conditions are romanized, and short_frac are under-length.
std::vector<std::string> make_stream(const std::vector<SynthLang>& langs, std::size_t n,
                                     double switch_frac, double short_frac, std::uint64_t seed,
                                     const Transliterator& translit);

}  // namespace scriptmix::synth
