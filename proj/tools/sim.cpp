#include <iostream>

#include "chiralwg/cli/commands.hpp"
#include "chiralwg/kernels.hpp"

int main(int argc, char** argv) {
  chiralwg::kernels::apply_thread_cap_from_env();
  return chiralwg::cli::run(argc, argv, std::cout, std::cerr);
}
