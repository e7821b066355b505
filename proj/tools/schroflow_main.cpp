#include <iostream>

#include "schroflow/cli.hpp"
#include "schroflow/error.hpp"

int main(int argc, char** argv) {
  using namespace schroflow;
  try {
    const auto manifest = cli::parse_and_validate(argc, argv, std::cout);
    if (!manifest) return cli::exit_code::completed;
    return cli::execute(*manifest, std::cout);
  } catch (const Error& e) {
    std::cerr << "schroflow: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage: return cli::exit_code::usage;
      case ErrorKind::BlowUp: return cli::exit_code::blowup;
      default: return cli::exit_code::solver_failure;
    }
  } catch (const std::exception& e) {
    std::cerr << "schroflow: " << e.what() << "\n";
    return cli::exit_code::solver_failure;
  }
}
