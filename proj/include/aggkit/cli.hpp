#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace aggkit::cli {

/// Exit codes: 0 positive verdict, 1 negative verdict, 2 input error, 3 missing data.
enum Exit : int { Positive = 0, Negative = 1, InputFailure = 2, MissingInput = 3 };

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in = std::cin);

} // namespace aggkit::cli
