#ifndef LANDEX_CLI_HPP
#define LANDEX_CLI_HPP

namespace landex {
namespace cli {

// Entry point behind the `landex` binary. Exit codes: 0 success, 2 usage
// error, 3 data error (parse/validation), 4 numerical error (rank
// deficiency and friends).
int run(int argc, const char* const* argv);

}  // namespace cli
}  // namespace landex

#endif  // LANDEX_CLI_HPP
