#ifndef NEWSLENS_CLI_H_
#define NEWSLENS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace newslens {

// Entry point of the `newslens` binary. `args` excludes the program name.
// Returns the process exit status: 0 on success, 2 for usage and
// configuration faults, otherwise ExitStatus() of the failing error.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

// Timestamp recorded in snapshots: SOURCE_DATE_EPOCH when set, otherwise
// the latest article publication time.
std::string SnapshotTimestamp(const class Corpus &corpus);

}  // namespace newslens

#endif  // NEWSLENS_CLI_H_
