#ifndef NEWSLENS_PERSONS_H_
#define NEWSLENS_PERSONS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "newslens/textproc.h"

namespace newslens {

struct Person {
  std::string person_id;
  // Longest alias; ties go to the lexicographically smaller one.
  std::string canonical_name;
  std::set<std::string> aliases;
  std::map<std::string, int> mention_counts;  // article id -> mentions
  int total_mentions = 0;

  bool operator==(const Person &) const = default;
};

// Clusters the mentions of one topic into persons and fills every
// mention's person_id. Mentions are visited in (article id, sentence index,
// span begin) order. Multi-word names are clustered first by exact name;
// a one-word mention then joins:
//   1. the cluster it already names exactly;
//   2. the only multi-word cluster ending in that word;
//   3. if several clusters end in it, the one named most recently earlier in
//      the same article, else the one with the most mentions so far;
//   4. otherwise a new cluster.
// Gazetteer canonical names stand in for surfaces when present. Words
// attached through rule 3 are ambiguous and are not recorded as aliases.
// Person ids are "p<N>" in canonical-name order.
std::vector<Person> ResolvePersons(std::vector<PersonMention> &mentions);

// Person with the most mentions; ties go to the lexicographically smallest
// canonical name. Throws Error(kNoPersons) when nobody has a mention.
const Person &MostFrequentActor(const std::vector<Person> &persons);

}  // namespace newslens

#endif  // NEWSLENS_PERSONS_H_
