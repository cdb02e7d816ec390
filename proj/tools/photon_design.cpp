#include <cqed/app/commands.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return cqed::app::run_cli(argc, argv, std::cout, std::cerr);
}
