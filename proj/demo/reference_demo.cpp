// Runs the full pipeline on the four-play reference fixture and prints the
// play windows and the game log. Usage: reference_demo [fixture-dir]

#include <iostream>

#include "playindex/playindex.hpp"

#ifndef PLAYINDEX_REFERENCE_DIR
#define PLAYINDEX_REFERENCE_DIR "tests/data/reference_game"
#endif

int main(int argc, char** argv) {
  using namespace playindex;
  const std::filesystem::path dir = argc > 1 ? argv[1] : PLAYINDEX_REFERENCE_DIR;
  try {
    const auto cfg = load_game_config(dir / "game.cfg");
    const auto out = run_pipeline(read_text_file(dir / "clock.txt"), read_text_file(dir / "detections.txt"), cfg);
    std::cout << "# play windows\n" << out.windows_text << "\n# game log\n" << out.game_log;
    const auto expected = dir / "expected_log.csv";
    if (std::filesystem::exists(expected))
      std::cout << "\nmatches expected_log.csv: " << (out.game_log == read_text_file(expected) ? "yes" : "no") << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
