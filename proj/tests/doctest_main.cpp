#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <string>
#include <string_view>
#include <vector>

// Path of the mcqual CLI binary, injected by ctest (see tests/CMakeLists.txt)
// so the cli suite can exercise the real executable.
std::string g_cli_path;

int main(int argc, char** argv) {
  std::vector<char*> passthrough;
  passthrough.reserve(static_cast<std::size_t>(argc));
  constexpr std::string_view kCliFlag = "--cli-path=";
  for (int i = 0; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg.rfind(kCliFlag, 0) == 0) {
      g_cli_path = std::string(arg.substr(kCliFlag.size()));
    } else {
      passthrough.push_back(argv[i]);
    }
  }

  doctest::Context context(static_cast<int>(passthrough.size()),
                           passthrough.data());
  return context.run();
}
