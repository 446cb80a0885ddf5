#pragma once

// Command-line front end.  Every command reads a JSON config, writes its data
// files and a manifest.json under --out, and reports through its exit code.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scatlab::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfigError = 2,
    kSolverFailure = 3,
    kCheckFailed = 4,  // identity violation, failed assertion or separability FAIL
    kNotInDictionary = 5,
    kAmbiguous = 6,
};

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args);

/// 64-bit FNV-1a of the bytes of a file, as "fnv1a64:<16 hex digits>".
std::string file_digest(const std::filesystem::path& path);

}  // namespace scatlab::cli
