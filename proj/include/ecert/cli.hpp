#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ecert::cli {

// Exit codes: 0 pass, 1 a check failed, 2 configuration or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// --threads wins, then ELLIPTIC_CERTS_THREADS, then 1.
int resolve_threads(int flag_value);

} // namespace ecert::cli
