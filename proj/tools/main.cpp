#include <iostream>
#include <string>
#include <vector>

#include "rdsteady/cli.hpp"
#include "rdsteady/errors.hpp"

// Exit codes: 0 success, 2 config error, 3 solver failure, 4 hypothesis
// validation failure.
int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        std::string help;
        const rdsteady::cli::RunConfig cfg = rdsteady::cli::parse_args(args, &help);
        if (cfg.command.empty()) {
            std::cout << help;
            return args.empty() ? 2 : 0; // bare invocation is a usage error
        }
        return rdsteady::cli::run(cfg);
    } catch (const rdsteady::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rdsteady::ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 4;
    } catch (const rdsteady::Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
