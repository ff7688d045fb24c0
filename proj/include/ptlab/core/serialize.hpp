#pragma once

#include <json.hpp>

#include "ptlab/core/hamiltonian.hpp"
#include "ptlab/core/pt.hpp"

namespace ptlab {

/// Complex numbers serialize as [re, im].
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

/// {e1: [re, im], e2: [re, im], h1: [re, im], h2: [re, im]}, values in MHz.
void to_json(nlohmann::json& j, const EffHamiltonian& H);
void from_json(const nlohmann::json& j, EffHamiltonian& H);

void to_json(nlohmann::json& j, const Radicand& d);
void to_json(nlohmann::json& j, const EigenPair& e);
void to_json(nlohmann::json& j, const PTReport& r);

}  // namespace ptlab
