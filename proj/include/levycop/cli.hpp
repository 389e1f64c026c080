#pragma once

#include <iosfwd>

namespace levycop {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitNumeric = 3 };

/// Command-line entry point:
///
///   levycop eval     --spec FILE --grid a:b:n[,a:b:n...] [--format csv|json]
///   levycop convert  --spec FILE [--to levy|proper] [--format csv|json]
///   levycop sample   --spec FILE --n N --seed S
///   levycop simulate --spec FILE --n N --seed S [--eps E] [--horizon T]
///   levycop verify   --suite NAME [--n N --seed S --eps E --horizon T --tol X]
///
/// Every command accepts --out FILE; the default is `out`. Diagnostics go to
/// `err`. Returns one of ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levycop
