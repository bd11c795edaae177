#include <moment_bounds/cli.hpp>

int main(int argc, char** argv) { return moment_bounds::cli::run(argc, argv); }
