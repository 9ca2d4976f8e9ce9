#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "secondwild/errors.hpp"

namespace secondwild::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Unreadable or malformed input file.
class InputError : public DomainError {
public:
    using DomainError::DomainError;
};

/// One value per line; '#' lines and blank lines are skipped, and a single
/// non-numeric first line is taken as a header.
[[nodiscard]] std::vector<double> read_series_file(const std::string& path);

/// Runs the command line `args` (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secondwild::cli
