// Acceptance gate: runs the full verification suite on the reference
// configuration and prints one pass/fail line per criterion. Exit status is
// nonzero if any criterion fails.

#include <cstdio>
#include <exception>

#include "scat/verify.hpp"

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <config-file>\n");
        return 2;
    }
    try {
        const scat::RunConfig cfg = scat::load_config(argv[1]);
        const scat::VerificationReport report = scat::run_verification(cfg);
        for (const auto& c : report.checks)
            std::printf("[%s] %-32s value=%.6e threshold=%.6e%s%s\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.threshold,
                        c.note.empty() ? "" : "  ", c.note.c_str());
        std::printf("%s (%zu checks)\n", report.all_pass() ? "ALL PASS" : "FAILURES PRESENT",
                    report.checks.size());
        return report.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
}
