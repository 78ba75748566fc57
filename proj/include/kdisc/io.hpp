#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kdisc/modeldisc.hpp"
#include "kdisc/rhsolver.hpp"

namespace kdisc {

// Model JSON schema:
//   {"n": 1, "weights": [1], "degree": 4,
//    "terms": [{"J": [2], "K": [2], "re": 1.0, "im": 0.0}, ...]}
HermitianPolynomial model_from_json(const std::string& text);
HermitianPolynomial model_from_file(const std::string& path);

// Perturbation JSON schema: {"terms": [{"J": [...], "K": [...], "l": 0,
// "re": ..., "im": ...}]} validated against the model.
PerturbationPoly theta_from_json(const std::string& text, int n);
PerturbationPoly theta_from_file(const std::string& path, int n);

std::string complex_to_string(Cplx a);

// Deterministic (ordered-key) JSON serializers used by the CLI reports.
nlohmann::ordered_json certificate_to_json(const AdmissibilityCertificate& cert);
nlohmann::ordered_json vector_to_json(const std::vector<Cplx>& v);
nlohmann::ordered_json circlefn_to_json(const CircleFunction& f, double tol = 1e-14);
nlohmann::ordered_json disc_to_json(const DiscLift& f);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace kdisc
