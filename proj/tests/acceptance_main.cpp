#include <iostream>

#include "acceptance.hpp"

int main(int argc, char** argv) {
    const auto cfg = soen::config::load(argc > 1 ? argv[1] : SOEN_DATA_DIR "/defaults.cfg");
    int failed = 0;
    soen::acceptance::run_all(cfg, [&](const soen::acceptance::Criterion& c) {
        std::cout << soen::acceptance::format(c) << std::flush;
        failed += c.passed() ? 0 : 1;
    });
    std::cout << (soen::acceptance::criterion_count - failed) << "/" << soen::acceptance::criterion_count
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
