#include <gicselect/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return gicselect::run_cli(argc, argv, std::cout, std::cerr);
}
