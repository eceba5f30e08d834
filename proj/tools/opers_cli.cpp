#include "opers/integrate.hpp"
#include "opers/io.hpp"
#include "opers/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>

using namespace opers;
using nlohmann::json;

namespace {

json exact(const GaussRat& x) {
    if (x.is_real()) return to_string(x.re());
    return json::array({to_string(x.re()), to_string(x.im())});
}

void algebra_command(char type, int rank, int cutoff) {
    auto m = AlgebraModel::build(type, rank, cutoff);
    json dims = json::object();
    for (int n = -cutoff; n <= cutoff; ++n) dims[std::to_string(n)] = m->ambient_dim(n);
    json out{{"model", json::parse(io::model_to_json(*m))},
             {"coxeter_number", m->dual_coxeter_number()},
             {"marks", m->marks()},
             {"exponents", m->exponent_values()},
             {"grade_dimensions", dims}};
    std::cout << out.dump(2) << "\n";
}

void canonicalize_command(const std::string& path) {
    MiuraData d = io::miura_from_json(io::read_file(path));
    auto q = quasi_canonicalize(build_miura(d));
    json out = json::parse(io::quasi_canonical_to_json(q));
    out["v1_predicted"] = json::parse(io::rf_to_json(v1_predicted(d)));
    std::cout << out.dump(2) << "\n";
}

int bethe_command(const std::string& path) {
    MiuraData d = io::miura_from_json(io::read_file(path));
    json roots = json::array();
    bool all_agree = true;
    for (const auto& v : regularity_check(d)) {
        all_agree = all_agree && v.agree();
        roots.push_back({{"root", v.root},
                         {"residual", exact(v.residual)},
                         {"regular_by_canonical_form", v.regular_by_canonical_form},
                         {"regular_by_criterion", v.regular_by_criterion},
                         {"pole_orders", v.pole_orders},
                         {"v1_residue", exact(v.v1_residue)}});
    }
    std::cout << json{{"roots", roots}, {"verdicts_agree", all_agree}}.dump(2) << "\n";
    return all_agree ? 0 : 1;
}

void integrate_command(const std::string& model_path, const std::string& contour_path, const std::string& pair,
                       int exponent, double tol) {
    MiuraData d = io::miura_from_json(io::read_file(model_path));
    Contour c;
    if (!contour_path.empty()) {
        c = io::contour_from_json(io::read_file(contour_path));
    } else {
        auto comma = pair.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--pochhammer expects i,j");
        c = pochhammer_for(d, std::stoi(pair.substr(0, comma)), std::stoi(pair.substr(comma + 1)));
    }
    QuadratureOptions opts;
    opts.abs_tol = tol;
    auto q = quasi_canonicalize(build_miura(d));
    std::cout << io::integral_to_json(twisted_integral(d, q, exponent, c, opts)) << "\n";
}

int verify_command(const std::string& suite, unsigned seed, const std::string& out_path) {
    auto report = verify::run_suite(suite, seed);
    for (const auto& c : report.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.instances << ")"
                  << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    if (out_path.empty()) {
        std::cout << report.to_json() << "\n";
    } else {
        std::ofstream(out_path) << report.to_json() << "\n";
    }
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine opers: quasi-canonical forms, Bethe roots and twisted period integrals"};
    app.require_subcommand(1);

    std::string type = "A";
    int rank = 1, cutoff = 9;
    auto* alg = app.add_subcommand("algebra", "Print exponents and grade dimensions of a loop algebra model");
    alg->add_option("--type", type, "A, D or E")->check(CLI::IsMember({"A", "D", "E"}));
    alg->add_option("--rank", rank)->check(CLI::PositiveNumber);
    alg->add_option("--cutoff", cutoff)->check(CLI::Range(2, 64));

    std::string model_path;
    auto* canon = app.add_subcommand("canonicalize", "Quasi-canonical form of the Miura oper in a data file");
    canon->add_option("--model", model_path, "Miura data JSON with an embedded model")->required()->check(CLI::ExistingFile);

    auto* bethe = app.add_subcommand("bethe-check", "Bethe residuals and regularity verdicts per root");
    bethe->add_option("--model", model_path, "Miura data JSON with an embedded model")->required()->check(CLI::ExistingFile);

    std::string contour_path, pair;
    int exponent = 1;
    double tol = 1e-10;
    auto* integ = app.add_subcommand("integrate", "Twisted period integral I_r over a closed contour");
    integ->add_option("--model", model_path, "Miura data JSON with an embedded model")->required()->check(CLI::ExistingFile);
    auto* contour_opt = integ->add_option("--contour", contour_path, "Contour JSON")->check(CLI::ExistingFile);
    auto* pair_opt = integ->add_option("--pochhammer", pair, "Pochhammer contour around marked points i,j");
    contour_opt->excludes(pair_opt);
    integ->add_option("--exponent", exponent, "Exponent r")->required();
    integ->add_option("--tol", tol, "Absolute error target");

    std::string suite = "all", json_path;
    unsigned seed = 42;
    auto* ver = app.add_subcommand("verify", "Run a property-check suite");
    ver->add_option("--suite", suite)->check(CLI::IsMember({"all", "algebra", "canonical", "bethe", "integrals", "covariance"}));
    ver->add_option("--seed", seed);
    ver->add_option("--json", json_path, "Write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*alg) algebra_command(type[0], rank, cutoff);
        if (*canon) canonicalize_command(model_path);
        if (*bethe) return bethe_command(model_path);
        if (*integ) {
            if (contour_path.empty() && pair.empty()) throw CLI::ValidationError("give --contour or --pochhammer");
            integrate_command(model_path, contour_path, pair, exponent, tol);
        }
        if (*ver) return verify_command(suite, seed, json_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
