#pragma once

namespace cmorrey {

// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 invalid config
// (including theorem hypotheses that could not be verified without --force).
int cli_main(int argc, char** argv);

}  // namespace cmorrey
