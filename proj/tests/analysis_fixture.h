#ifndef NEWSLENS_TESTS_ANALYSIS_FIXTURE_H_
#define NEWSLENS_TESTS_ANALYSIS_FIXTURE_H_

#include <string>

#include "newslens/corpus.h"
#include "newslens/pipeline.h"
#include "newslens/polarity.h"
#include "newslens/textproc.h"
#include "test_support.h"

namespace newslens::testing {

inline LexiconClassifier DefaultLexiconClassifier() {
  return LexiconClassifier(Lexicon::Load(DefaultData("lexicon.tsv")),
                           NegationList::Load(DefaultData("negations.txt")));
}

// Runs the full analysis on a test-data corpus with the default lexicon.
inline Snapshot AnalyzeTestCorpus(const std::string &corpus_file,
                                  const std::string &gazetteer_file,
                                  double theta = kDefaultTheta, uint64_t seed = 1,
                                  int jobs = 1) {
  Corpus corpus = LoadCorpus(TestData(corpus_file));
  Gazetteer gazetteer = Gazetteer::Load(TestData(gazetteer_file));
  AnalysisConfig config;
  config.theta = theta;
  config.seed = seed;
  config.jobs = jobs;
  config.created_at = "2023-03-01T00:00:00Z";
  return AnalyzeCorpus(corpus, gazetteer, DefaultLexiconClassifier(), config);
}

inline Snapshot StudySnapshot(double theta = kDefaultTheta, uint64_t seed = 1, int jobs = 1) {
  return AnalyzeTestCorpus("study_corpus.jsonl", "study_gazetteer.tsv", theta, seed, jobs);
}

inline Snapshot MiniSnapshot() {
  return AnalyzeTestCorpus("highlight_mini.jsonl", "highlight_gazetteer.tsv");
}

}  // namespace newslens::testing

#endif  // NEWSLENS_TESTS_ANALYSIS_FIXTURE_H_
