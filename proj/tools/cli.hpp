#pragma once

#include <iosfwd>

namespace pentaca::cli {

// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage or
// parse error. Errors are printed to `err` as `error: <kind>: <detail>`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pentaca::cli
