#include "ptlab/io/spectrum_io.hpp"

#include "ptlab/core/error.hpp"
#include "ptlab/core/serialize.hpp"
#include "ptlab/io/csv.hpp"

namespace ptlab::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSpectrumHeader = "f_MHz,reS11,imS11,reS12,imS12,reS21,imS21,reS22,imS22";

}  // namespace

fs::path sidecar_path(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".json");
    return p;
}

std::string spectrum_csv(const synth::Spectrum& spec, std::string_view config_hash) {
    std::string out = provenance_line(config_hash);
    out += '\n';
    out += kSpectrumHeader;
    out += '\n';
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const Mat2& s = spec.S[i];
        out += format_double(spec.freqs[i]);
        for (cplx z : {s.m00, s.m01, s.m10, s.m11}) {
            out += ',';
            out += format_double(z.real());
            out += ',';
            out += format_double(z.imag());
        }
        out += '\n';
    }
    return out;
}

nlohmann::json spectrum_sidecar(const synth::SpectrumMeta& meta, std::string_view config_hash) {
    return {{"s_mm", meta.s_mm},       {"delta_mm", meta.delta_mm},
            {"B_mT", meta.B_mT},       {"seed", meta.seed},
            {"sigma", meta.sigma},     {"config_hash", std::string(config_hash)},
            {"schema_version", kSchemaVersion}};
}

void write_spectrum(const fs::path& csv, const synth::Spectrum& spec, std::string_view config_hash) {
    write_text(csv, spectrum_csv(spec, config_hash));
    write_text(sidecar_path(csv), json_text(spectrum_sidecar(spec.meta, config_hash)));
}

synth::Spectrum parse_spectrum(std::string_view text, std::string_view origin) {
    const CsvTable t = parse_csv(text, origin);
    const std::size_t cf = t.column("f_MHz");
    const char* names[8] = {"reS11", "imS11", "reS12", "imS12", "reS21", "imS21", "reS22", "imS22"};
    std::size_t c[8];
    for (int k = 0; k < 8; ++k) c[k] = t.column(names[k]);
    synth::Spectrum sp;
    sp.freqs.reserve(t.rows.size());
    sp.S.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        sp.freqs.push_back(t.number(i, cf));
        auto z = [&](int k) { return cplx{t.number(i, c[2 * k]), t.number(i, c[2 * k + 1])}; };
        sp.S.push_back({z(0), z(1), z(2), z(3)});
    }
    if (sp.freqs.empty()) throw Error(Errc::parse_error, std::string(origin) + ": spectrum has no rows");
    sp.validate();
    return sp;
}

synth::Spectrum read_spectrum(const fs::path& csv) {
    synth::Spectrum sp = parse_spectrum(read_text(csv), csv.string());
    const fs::path side = sidecar_path(csv);
    if (fs::exists(side)) {
        const nlohmann::json j = read_json(side);
        try {
            sp.meta.s_mm = j.at("s_mm").get<double>();
            sp.meta.delta_mm = j.at("delta_mm").get<double>();
            sp.meta.B_mT = j.at("B_mT").get<double>();
            sp.meta.seed = j.value("seed", std::uint64_t{0});
            sp.meta.sigma = j.value("sigma", 0.0);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::parse_error, side.string() + ": " + e.what());
        }
    }
    return sp;
}

nlohmann::json fit_result_to_json(const fit::FitResult& r) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& row : r.W.rows()) w.push_back({row[0], row[1]});
    return {{"e1", complex_to_json(r.H.e1())},
            {"e2", complex_to_json(r.H.e2())},
            {"h1", complex_to_json(r.H.h1())},
            {"h2", complex_to_json(r.H.h2())},
            {"W", w},
            {"tau", r.tau},
            {"residual_rms", r.residual_rms},
            {"converged", r.converged},
            {"covariance_proxy", r.covariance_proxy},
            {"start_index", r.start_index},
            {"iterations", r.iterations}};
}

fit::FitResult fit_result_from_json(const nlohmann::json& j) {
    try {
        fit::FitResult r;
        r.H = EffHamiltonian::from_pauli(complex_from_json(j.at("e1")), complex_from_json(j.at("e2")),
                                         complex_from_json(j.at("h1")), complex_from_json(j.at("h2")));
        std::vector<std::array<double, 2>> rows;
        for (const auto& row : j.at("W")) rows.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        r.W = synth::CouplingSet(std::move(rows));
        r.tau = j.at("tau").get<double>();
        r.residual_rms = j.at("residual_rms").get<double>();
        r.converged = j.at("converged").get<bool>();
        r.covariance_proxy = j.value("covariance_proxy", std::vector<double>{});
        r.start_index = j.value("start_index", 0);
        r.iterations = j.value("iterations", 0);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("fit result: ") + e.what());
    }
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json read_json(const fs::path& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
}

}  // namespace ptlab::io
