#include "ptlab/core/serialize.hpp"

#include "ptlab/core/error.hpp"

namespace ptlab {

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(Errc::parse_error, "complex value must be [re, im], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

void to_json(nlohmann::json& j, const EffHamiltonian& H) {
    j = nlohmann::json{{"e1", complex_to_json(H.e1())},
                       {"e2", complex_to_json(H.e2())},
                       {"h1", complex_to_json(H.h1())},
                       {"h2", complex_to_json(H.h2())}};
}

void from_json(const nlohmann::json& j, EffHamiltonian& H) {
    for (const char* key : {"e1", "e2", "h1", "h2"})
        if (!j.contains(key)) throw Error(Errc::parse_error, std::string("Hamiltonian missing key ") + key);
    H = EffHamiltonian::from_pauli(complex_from_json(j["e1"]), complex_from_json(j["e2"]),
                                   complex_from_json(j["h1"]), complex_from_json(j["h2"]));
}

void to_json(nlohmann::json& j, const Radicand& d) {
    j = nlohmann::json{{"reh2", d.reh2}, {"imh2", d.imh2}, {"cross", d.cross}};
}

void to_json(nlohmann::json& j, const EigenPair& e) {
    j = nlohmann::json{{"E1", complex_to_json(e.E1)}, {"E2", complex_to_json(e.E2)}};
}

void to_json(nlohmann::json& j, const PTReport& r) {
    j = nlohmann::json{{"offset", r.offset},
                       {"tau", r.tau},
                       {"phi0", r.phi0},
                       {"phi", r.phi},
                       {"A", r.form.A},
                       {"B", r.form.B},
                       {"C", r.form.C},
                       {"D", r.form.Dpt},
                       {"residual", r.form.residual},
                       {"phase", pt_phase_name(r.phase)},
                       {"commutator_norm", r.commutator_norm},
                       {"antilinear_residual", r.antilinear_residual},
                       {"eigvec_pt_overlap", r.eigvec_pt_overlap},
                       {"shifted_eigenvalues", r.shifted_eigenvalues}};
}

}  // namespace ptlab
