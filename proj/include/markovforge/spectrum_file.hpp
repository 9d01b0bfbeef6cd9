#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "markovforge/classifier.hpp"
#include "markovforge/spectrum.hpp"

namespace markovforge {

constexpr int kSpectrumFormatVersion = 1;

/// On-disk form of a spectrum plus the lift and target it was built for.
///
/// Interval endpoints are written as decimal strings that read back to the
/// identical binary value, so write -> read -> write is byte-exact.
struct SpectrumFile {
    int format_version = kSpectrumFormatVersion;
    LoopSpectrum spectrum;
    std::optional<std::string> entropy_target;
    std::size_t period_lift = 1;

    friend bool operator==(const SpectrumFile&, const SpectrumFile&) = default;
};

std::string write_spectrum_file(const SpectrumFile& file);
SpectrumFile read_spectrum_file(const std::string& text);

SpectrumFile load_spectrum_file(const std::string& path);
void save_spectrum_file(const SpectrumFile& file, const std::string& path);

/// Report as JSON; interval endpoints are outward-rounded decimal strings.
std::string report_to_json(const ClassificationReport& report, bool entropy_in_bits = false);

}  // namespace markovforge
