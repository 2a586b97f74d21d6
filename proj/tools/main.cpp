#include <csignal>
#include <iostream>

#include "cli.hpp"
#include "lpr/survey.hpp"

namespace {

extern "C" void on_interrupt(int) { lpr::request_survey_stop(); }

}  // namespace

int main(int argc, char** argv) {
  // a running survey flushes what it has and exits with code 2
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
  return lpr::cli::run(argc, argv, std::cout, std::cerr);
}
