#ifndef RLRA_CLI_HPP
#define RLRA_CLI_HPP

namespace rlra {

/// Command-line front door. Exit code 0 on success, 2 on usage errors,
/// 1 on runtime errors.
int cli_main(int argc, char** argv);

}  // namespace rlra

#endif
