#include "vms/cli.hpp"

int main(int argc, char** argv)
{
    return vms::cli::run(argc, argv);
}
