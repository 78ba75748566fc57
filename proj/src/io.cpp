#include "kdisc/io.hpp"

#include <fstream>
#include <sstream>

using nlohmann::json;
using nlohmann::ordered_json;

namespace kdisc {

namespace {

MultiIndex multi_index(const json& arr, int n, const char* what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        throw ValidationError(std::string(what) + " must be an array of length n");
    MultiIndex J;
    for (const auto& x : arr) {
        if (!x.is_number_integer() || x.get<int>() < 0)
            throw ValidationError(std::string(what) + " entries must be nonnegative integers");
        J.push_back(x.get<int>());
    }
    return J;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ValidationError("unknown key '" + it.key() + "'");
    }
}

} // namespace

HermitianPolynomial model_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.is_object()) throw ValidationError("model file must hold a JSON object");
    reject_unknown_keys(j, {"n", "weights", "degree", "terms"});
    for (const char* k : {"n", "weights", "terms"})
        if (!j.contains(k)) throw ValidationError(std::string("model is missing field '") + k + "'");
    int n = j.at("n").get<int>();
    if (n < 1) throw ValidationError("field 'n' must be >= 1");
    std::vector<int> weights = j.at("weights").get<std::vector<int>>();
    if (static_cast<int>(weights.size()) != n)
        throw ValidationError("'weights' must have n entries");
    WeightVector M = WeightVector::make(weights);
    ComplexPoly raw(n);
    for (const auto& term : j.at("terms")) {
        reject_unknown_keys(term, {"J", "K", "re", "im"});
        MultiIndex J = multi_index(term.at("J"), n, "'J'");
        MultiIndex K = multi_index(term.at("K"), n, "'K'");
        double re = term.value("re", 0.0), im = term.value("im", 0.0);
        raw.add_term(J, K, Cplx(re, im));
    }
    HermitianPolynomial P = HermitianPolynomial::validate(raw, M);
    if (j.contains("degree") && j.at("degree").get<int>() != P.degree())
        throw ValidationError("declared 'degree' does not match the terms");
    return P;
}

HermitianPolynomial model_from_file(const std::string& path) {
    return model_from_json(read_text_file(path));
}

PerturbationPoly theta_from_json(const std::string& text, int n) {
    json j = parse(text);
    if (!j.is_object()) throw ValidationError("perturbation file must hold a JSON object");
    reject_unknown_keys(j, {"terms"});
    PerturbationPoly theta(n);
    if (j.contains("terms")) {
        for (const auto& term : j.at("terms")) {
            reject_unknown_keys(term, {"J", "K", "l", "re", "im"});
            MultiIndex J = multi_index(term.at("J"), n, "'J'");
            MultiIndex K = multi_index(term.at("K"), n, "'K'");
            int l = term.value("l", 0);
            double re = term.value("re", 0.0), im = term.value("im", 0.0);
            theta.add_term(J, K, l, Cplx(re, im));
        }
    }
    return theta;
}

PerturbationPoly theta_from_file(const std::string& path, int n) {
    return theta_from_json(read_text_file(path), n);
}

std::string complex_to_string(Cplx a) {
    std::ostringstream os;
    os.precision(17);
    os << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i";
    return os.str();
}

ordered_json certificate_to_json(const AdmissibilityCertificate& cert) {
    ordered_json j;
    j["admissible"] = cert.admissible;
    j["min_absQ"] = cert.min_absQ;
    j["max_absQ"] = cert.max_absQ;
    j["min_theta"] = cert.min_theta;
    j["min_root_gap"] = cert.min_root_gap;
    j["P_at_v"] = cert.P_at_v;
    j["reason"] = cert.reason;
    return j;
}

ordered_json vector_to_json(const std::vector<Cplx>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : v) arr.push_back({{"re", c.real()}, {"im", c.imag()}});
    return arr;
}

ordered_json circlefn_to_json(const CircleFunction& f, double tol) {
    ordered_json arr = ordered_json::array();
    for (int k = -f.truncation(); k <= f.truncation(); ++k) {
        Cplx c = f.coeff(k);
        if (std::abs(c) <= tol) continue;
        arr.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    }
    return arr;
}

ordered_json disc_to_json(const DiscLift& f) {
    ordered_json j;
    j["n"] = f.n();
    j["weights"] = f.M.m;
    j["degree"] = f.degree;
    j["k0"] = f.k0;
    if (!f.v.empty()) j["v"] = vector_to_json(f.v);
    ordered_json h = ordered_json::array(), ht = ordered_json::array();
    for (const auto& c : f.h) h.push_back(circlefn_to_json(c));
    for (const auto& c : f.htilde) ht.push_back(circlefn_to_json(c));
    j["h"] = h;
    j["g"] = circlefn_to_json(f.g);
    j["htilde"] = ht;
    j["gtilde"] = circlefn_to_json(f.gtilde);
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace kdisc
