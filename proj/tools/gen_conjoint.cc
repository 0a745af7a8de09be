// Writes a synthetic conjoint response CSV with known level effects.

#include <iostream>

#include "CLI11.hpp"
#include "newslens/conjoint.h"
#include "newslens/error.h"
#include "newslens/util.h"

int main(int argc, char **argv) {
  CLI::App app{"Synthetic conjoint response generator"};
  uint64_t seed = 1;
  int respondents = 1000;
  int tasks = 5;
  double noise = 2.0;
  std::string out;
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--respondents", respondents, "Number of respondents")->check(CLI::PositiveNumber);
  app.add_option("--tasks", tasks, "Tasks per respondent")->check(CLI::PositiveNumber);
  app.add_option("--noise-sd", noise, "Outcome noise standard deviation")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output CSV (default: stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  newslens::SyntheticDesign design = newslens::DefaultSyntheticDesign();
  design.respondents = respondents;
  design.tasks_per_respondent = tasks;
  design.noise_sd = noise;
  std::string csv = newslens::SerializeResponses(newslens::GenerateResponses(design, seed));
  try {
    if (out.empty()) {
      std::cout << csv;
    } else {
      newslens::WriteFile(out, csv);
    }
  } catch (const newslens::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return newslens::ExitStatus(e.code());
  }
  return 0;
}
