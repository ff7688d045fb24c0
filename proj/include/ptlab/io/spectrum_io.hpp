#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ptlab/fit/fit.hpp"
#include "ptlab/synth/spectrum.hpp"

namespace ptlab::io {

/// `<stem>.json` next to a spectrum CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

std::string spectrum_csv(const synth::Spectrum& spec, std::string_view config_hash);
nlohmann::json spectrum_sidecar(const synth::SpectrumMeta& meta, std::string_view config_hash);

/// Writes the CSV and its sidecar.
void write_spectrum(const std::filesystem::path& csv, const synth::Spectrum& spec, std::string_view config_hash);

/// Reads a spectrum CSV; meta comes from the sidecar when it exists.
synth::Spectrum read_spectrum(const std::filesystem::path& csv);
synth::Spectrum parse_spectrum(std::string_view text, std::string_view origin = "<memory>");

nlohmann::json fit_result_to_json(const fit::FitResult& r);
fit::FitResult fit_result_from_json(const nlohmann::json& j);

/// Pretty JSON dump with a trailing newline.
std::string json_text(const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ptlab::io
