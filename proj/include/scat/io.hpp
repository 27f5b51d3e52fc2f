#pragma once

// CSV / JSON emission. Every file starts with a header carrying the tool
// version and the config hash, so outputs are traceable to the exact run
// configuration. Numeric CSV cells are full-precision scientific notation,
// locale-independent.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scat/pipeline.hpp"
#include "scat/radial.hpp"
#include "scat/verify.hpp"

namespace scat {

constexpr const char* kVersion = "0.1.0";

namespace io {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

inline FilePtr open_for_write(const std::filesystem::path& path)
{
    FilePtr f(std::fopen(path.string().c_str(), "w"), &std::fclose);
    if (!f)
        throw std::runtime_error("cannot open output file '" + path.string() + "'");
    return f;
}

inline void write_header(std::FILE* f, std::uint64_t config_hash)
{
    std::fprintf(f, "# scat %s\n# config_hash = %016" PRIx64 "\n", kVersion, config_hash);
}

inline nlohmann::json json_header(std::uint64_t config_hash)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash);
    return {{"tool", "scat"}, {"version", kVersion}, {"config_hash", buf}};
}

inline void write_amplitude_csv(const std::filesystem::path& path, const AmplitudeMatrix& am,
                                std::uint64_t config_hash)
{
    auto f = open_for_write(path);
    write_header(f.get(), config_hash);
    std::fprintf(f.get(), "a,b,re_f,im_f\n");
    for (int a = 0; a < am.f.rows(); ++a)
        for (int b = 0; b < am.f.cols(); ++b)
            std::fprintf(f.get(), "%d,%d,%.17e,%.17e\n", a, b, am.f(a, b).real(),
                         am.f(a, b).imag());
}

inline void write_amplitude_json(const std::filesystem::path& path, const AmplitudeMatrix& am,
                                 std::uint64_t config_hash)
{
    nlohmann::json j = json_header(config_hash);
    j["lambda"] = am.lambda;
    auto& entries = j["entries"] = nlohmann::json::array();
    for (int a = 0; a < am.f.rows(); ++a)
        for (int b = 0; b < am.f.cols(); ++b)
            entries.push_back({{"a", a}, {"b", b}, {"re", am.f(a, b).real()},
                               {"im", am.f(a, b).imag()}});
    auto f = open_for_write(path);
    const std::string text = j.dump(2);
    std::fwrite(text.data(), 1, text.size(), f.get());
    std::fputc('\n', f.get());
}

inline void write_spectrum_csv(const std::filesystem::path& path, const SMatrixSpectrum& spec,
                               const std::vector<int>& degrees, std::uint64_t config_hash)
{
    auto f = open_for_write(path);
    write_header(f.get(), config_hash);
    std::fprintf(f.get(), "j,re_nu,im_nu,abs_nu,cluster_l\n");
    for (int j = 0; j < spec.size(); ++j) {
        const int l = j < static_cast<int>(degrees.size()) ? degrees[static_cast<std::size_t>(j)]
                                                           : -1;
        std::fprintf(f.get(), "%d,%.17e,%.17e,%.17e,%d\n", j, spec.nu[j].real(),
                     spec.nu[j].imag(), std::abs(spec.nu[j]), l);
    }
}

inline void write_phase_shifts_csv(const std::filesystem::path& path, const PhaseShiftTable& t,
                                   std::uint64_t config_hash)
{
    auto f = open_for_write(path);
    write_header(f.get(), config_hash);
    std::fprintf(f.get(), "l,delta,re_s,im_s\n");
    for (int l = 0; l <= t.l_max(); ++l)
        std::fprintf(f.get(), "%d,%.17e,%.17e,%.17e\n", l, t.delta[static_cast<std::size_t>(l)],
                     t.s_ell[static_cast<std::size_t>(l)].real(),
                     t.s_ell[static_cast<std::size_t>(l)].imag());
}

inline void write_bound_states_csv(const std::filesystem::path& path,
                                   const std::vector<BoundState>& states,
                                   std::uint64_t config_hash)
{
    auto f = open_for_write(path);
    write_header(f.get(), config_hash);
    std::fprintf(f.get(), "kappa,energy\n");
    for (const auto& s : states)
        std::fprintf(f.get(), "%.17e,%.17e\n", s.kappa, s.energy);
}

inline void write_report(const std::filesystem::path& path, const VerificationReport& report)
{
    nlohmann::json j = json_header(report.config_hash);
    j["grid"] = {{"n_r", report.n_r}, {"n_theta", report.n_theta}, {"n_phi", report.n_phi},
                 {"r_max", report.r_max}};
    auto& checks = j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                          {"pass", c.pass}, {"note", c.note}});
    j["all_pass"] = report.all_pass();
    auto f = open_for_write(path);
    const std::string text = j.dump(2);
    std::fwrite(text.data(), 1, text.size(), f.get());
    std::fputc('\n', f.get());
}

} // namespace io
} // namespace scat
