#include <iostream>

#include <decimate/acceptance.hpp>

int main() {
    int failed = 0;
    for (const auto& r : decimate::acceptance::run_all()) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " | " << r.detail
                  << " | " << r.seconds << " s\n";
        if (!r.pass) ++failed;
    }
    std::cout << failed << " of 11 criteria failed\n";
    return failed == 0 ? 0 : 1;
}
