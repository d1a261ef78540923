#include "tskam/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

// usage: acceptance [id ...]; exit status 1 if any criterion fails
int main(int argc, char** argv) {
    tskam::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) opt.only.push_back(argv[i]);
    if (const char* s = std::getenv("TSKAM_SEED")) opt.seed = std::strtoull(s, nullptr, 10);
    int failed = 0, total = 0;
    tskam::run_acceptance(opt, [&](const tskam::CriterionResult& r) {
        std::printf("%s\n", tskam::format_line(r).c_str());
        std::fflush(stdout);
        ++total;
        failed += !r.pass;
    });
    std::printf("%d/%d criteria passed\n", total - failed, total);
    return failed ? 1 : 0;
}
