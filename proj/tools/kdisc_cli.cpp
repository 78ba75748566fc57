#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdisc/io.hpp"
#include "kdisc/jets.hpp"
#include "kdisc/rhsolver.hpp"

using nlohmann::ordered_json;
using namespace kdisc;

namespace {

struct Options {
    std::string model_path;
    std::string theta_path;
    int nf = 48;
    int trials = 64;
    uint64_t seed = 0;
    double tol = 1e-6;
    std::string out;
    std::string grid = "zero";
};

void emit(const ordered_json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

std::vector<Cplx> pick_admissible(const HermitianPolynomial& P, const Options& opt) {
    FindAdmissibleResult r = find_admissible(P, opt.trials, opt.seed);
    if (!r.found)
        throw NumericalError("no admissible direction found in " + std::to_string(opt.trials) +
                             " trials (" + r.certificate.reason + ")");
    return r.v;
}

ordered_json analyze_report(const HermitianPolynomial& P, const Options& opt) {
    ordered_json j;
    j["n"] = P.n();
    j["weights"] = P.weight().m;
    j["degree"] = P.degree();
    j["k0"] = P.k0();
    FindAdmissibleResult r = find_admissible(P, opt.trials, opt.seed);
    j["admissible"] = r.found;
    j["certificate"] = certificate_to_json(r.certificate);
    if (!r.found) {
        j["reason"] = r.certificate.reason;
        return j;
    }
    j["v"] = vector_to_json(r.v);
    LeviCoefficients lev = levi_coefficients(P, r.v);
    j["indQ"] = winding_number(lev.detQ);
    JetBoundReport b = jet_bound(P, r.v);
    j["jet_bound_generic"] = b.generic;
    j["jet_bound_refined"] = b.refined;
    j["kernel_bound"] = b.kernel_bound;
    if (b.kernel_exact >= 0) j["kernel_exact"] = b.kernel_exact;
    return j;
}

std::vector<std::vector<double>> parse_grid(const std::string& spec, int dim) {
    std::vector<std::vector<double>> grid;
    if (spec == "zero") {
        grid.emplace_back(dim, 0.0);
        return grid;
    }
    if (spec.rfind("axes:", 0) == 0) {
        double delta = std::stod(spec.substr(5));
        for (int j = 0; j < dim; ++j)
            for (double s : {+1.0, -1.0}) {
                std::vector<double> c(dim, 0.0);
                c[j] = s * delta;
                grid.push_back(c);
            }
        return grid;
    }
    throw ValidationError("unknown grid spec '" + spec + "' (use 'zero' or 'axes:<delta>')");
}

std::string family_csv(const DiscLift& f, int samples = 256) {
    std::ostringstream os;
    os.precision(17);
    os << "theta";
    for (int i = 0; i < f.n(); ++i) os << ",re_h" << i + 1 << ",im_h" << i + 1;
    os << ",re_g,im_g\n";
    for (int q = 0; q < samples; ++q) {
        double th = 2.0 * std::numbers::pi * q / samples;
        Cplx zeta(std::cos(th), std::sin(th));
        os << th;
        for (int i = 0; i < f.n(); ++i) {
            Cplx z = f.h[i].eval(zeta);
            os << "," << z.real() << "," << z.imag();
        }
        Cplx w = f.g.eval(zeta);
        os << "," << w.real() << "," << w.imag() << "\n";
    }
    return os.str();
}

int run_attach(const Options& opt, bool family_mode) {
    HermitianPolynomial P = model_from_file(opt.model_path);
    PerturbationPoly theta(P.n());
    if (!opt.theta_path.empty()) theta = theta_from_file(opt.theta_path, P.n());
    PerturbedHypersurface r = PerturbedHypersurface::validate(P, theta);

    std::vector<Cplx> v = pick_admissible(P, opt);
    DiscLift f0 = build_lift(P, v);
    LinearizedSystem lin = linearize(P, v, opt.nf);
    auto grid = parse_grid(family_mode && opt.grid == "zero" ? "axes:0.01" : opt.grid,
                           lin.kernel_dim);

    auto entries = disc_family(r, f0, lin, grid);
    ordered_json j;
    j["kernel_dim"] = lin.kernel_dim;
    j["grid_points"] = static_cast<int>(grid.size());
    ordered_json arr = ordered_json::array();
    bool all_ok = true;
    const DiscLift* first_ok = nullptr;
    for (const auto& e : entries) {
        ordered_json je;
        je["coords"] = e.coords;
        je["ok"] = e.ok;
        if (e.ok) {
            je["residual"] = e.residual;
            je["disc"] = disc_to_json(e.disc);
            if (!first_ok) first_ok = &e.disc;
        } else {
            je["error"] = e.error;
            all_ok = false;
        }
        arr.push_back(je);
    }
    j["discs"] = arr;
    emit(j, opt.out);
    if (first_ok && !opt.out.empty())
        write_text_file(opt.out + ".csv", family_csv(*first_ok));
    if (!all_ok) throw NumericalError("one or more grid points failed to converge");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stationary-disc toolkit for weighted-homogeneous model hypersurfaces"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "model summary: weights, degree, k0, admissibility, index, jet bounds"},
        {"find-admissible", "search random directions for an admissible v"},
        {"levi", "Levi coefficient functions Q, S and the determinant Q^v"},
        {"indices", "Maslov index and partial indices of the reduced symbol"},
        {"attach", "attach discs to a perturbed hypersurface by Newton iteration"},
        {"jet-bound", "generic and refined jet-order bounds with kernel data"},
        {"family", "sweep a grid of kernel coordinates and report the disc family"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("model", opt.model_path, "model JSON file")->required();
        if (std::string(name) == "attach" || std::string(name) == "family")
            sub->add_option("theta", opt.theta_path, "perturbation JSON file");
        sub->add_option("--nf", opt.nf, "Fourier truncation for solves");
        sub->add_option("--trials", opt.trials, "admissible-direction trials");
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("--tol", opt.tol, "admissibility tolerance");
        sub->add_option("--out", opt.out, "output file (stdout if absent)");
        sub->add_option("--grid", opt.grid, "grid spec: 'zero' or 'axes:<delta>'");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        HermitianPolynomial P = model_from_file(opt.model_path);
        if (command == "analyze") {
            emit(analyze_report(P, opt), opt.out);
        } else if (command == "find-admissible") {
            FindAdmissibleResult r = find_admissible(P, opt.trials, opt.seed);
            ordered_json j;
            j["found"] = r.found;
            j["trial"] = r.trial;
            j["v"] = vector_to_json(r.v);
            j["certificate"] = certificate_to_json(r.certificate);
            emit(j, opt.out);
        } else if (command == "levi") {
            std::vector<Cplx> v = pick_admissible(P, opt);
            LeviCoefficients lev = levi_coefficients(P, v);
            ordered_json j;
            j["v"] = vector_to_json(v);
            ordered_json q = ordered_json::array(), s = ordered_json::array();
            for (int i = 0; i < P.n(); ++i)
                for (int k = 0; k < P.n(); ++k) {
                    q.push_back({{"i", i}, {"j", k}, {"coeffs", circlefn_to_json(lev.Q[i][k])}});
                    s.push_back({{"i", i}, {"j", k}, {"coeffs", circlefn_to_json(lev.S[i][k])}});
                }
            j["Q"] = q;
            j["S"] = s;
            j["detQ"] = circlefn_to_json(lev.detQ);
            j["Qprime"] = circlefn_to_json(lev.Qprime);
            j["indQ"] = winding_number(lev.detQ);
            emit(j, opt.out);
        } else if (command == "indices") {
            std::vector<Cplx> v = pick_admissible(P, opt);
            LeviCoefficients lev = levi_coefficients(P, v);
            MatrixLoop A = reduce_to_A(lev, P.weight(), P.degree());
            MatrixLoop L = symbol(A, 64);
            ordered_json j;
            j["v"] = vector_to_json(v);
            j["maslov"] = maslov_index(L);
            j["partial_indices"] = partial_indices(L, 8);
            j["indQ"] = winding_number(lev.detQ);
            emit(j, opt.out);
        } else if (command == "jet-bound") {
            JetBoundReport b = jet_bound(P);
            ordered_json j;
            j["generic"] = b.generic;
            j["refined"] = b.refined;
            j["indQ"] = b.indQ;
            j["kernel_bound"] = b.kernel_bound;
            if (b.kernel_exact >= 0) j["kernel_exact"] = b.kernel_exact;
            j["have_admissible"] = b.have_admissible;
            emit(j, opt.out);
        } else if (command == "attach") {
            return run_attach(opt, false);
        } else if (command == "family") {
            return run_attach(opt, true);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
