// mhsctl: scenario runner for the mhs library.

#include "mhs/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mhs;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    return out;
}

GVec parse_gauss_list(const std::string& text, const std::string& option)
{
    GVec v;
    try {
        for (const auto& x : split_list(text))
            v.push_back(parse_gauss(x));
    } catch (const std::exception& e) {
        throw UsageError(option + ": " + e.what());
    }
    return v;
}

struct Common {
    std::string scenario;
    std::optional<int> truncation;
    std::optional<std::uint64_t> seed;
    std::string samples;
    bool json = false;
    bool text = false;
};

Scenario load(const Common& c)
{
    Scenario s = c.scenario.empty() ? builtin_h1_scenario() : load_scenario(c.scenario);
    if (c.truncation)
        s.params.truncation = *c.truncation;
    if (c.seed)
        s.params.seed = *c.seed;
    if (!c.samples.empty())
        s.params.samples = parse_samples(read_json_file(c.samples));
    return s;
}

int emit(const Report& r, const Common& c)
{
    if (c.json)
        std::cout << r.to_json().dump(2) << "\n";
    else
        std::cout << r.to_text();
    return r.ok() ? 0 : 1;
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--scenario", c.scenario, "scenario JSON file (default: built-in h1_orbit)");
    app->add_option("--truncation", c.truncation, "truncation degree D")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", c.seed, "seed recorded in the report");
    app->add_option("--samples", c.samples, "JSON file with numeric samples");
    auto* j = app->add_flag("--json", c.json, "JSON report");
    auto* t = app->add_flag("--text", c.text, "text report (default)");
    j->excludes(t);
}

void apply_n(Scenario& s, std::optional<int> n)
{
    if (!n)
        return;
    if (*n < 1)
        throw UsageError("--n must be at least 1");
    s.params.n = *n;
}

NilpotentOrbit pulled_back(const Scenario& s)
{
    NilpotentOrbit o = s.orbit;
    o.family = NilpotentFamily::pullback(s.orbit.family.N.at(0), s.params.n);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact computations with mixed Hodge structures and nilpotent orbits"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> check_list;
    std::optional<int> n;
    std::string lambda, c_text, alpha_text, extension_path, output_path;

    auto* check = app.add_subcommand("check", "run the checks requested by a scenario");
    add_common(check, common);
    check->add_option("--check", check_list, "override the scenario's check list")->delimiter(',');

    auto* coh = app.add_subcommand("cohomology", "complexes I and K and their cohomology");
    add_common(coh, common);
    coh->add_option("--n", n, "pull the first operator back to n variables");

    auto* cls = app.add_subcommand("class", "class of an extension");
    add_common(cls, common);
    cls->add_option("--extension", extension_path, "extension file written by build-ext")->required();
    cls->add_option("--alpha", alpha_text, "expected cycle coefficients; compared with the extension's class");

    auto* build = app.add_subcommand("build-ext", "extension realising a Hodge class");
    add_common(build, common);
    build->add_option("--n", n, "number of variables of the pullback");
    build->add_option("--alpha", alpha_text, "coefficients on the canonical basis of Z^1(I)")->required();
    build->add_option("--output", output_path, "write the extension file here");

    auto* deform = app.add_subcommand("deform", "checks on the one-parameter deformation");
    add_common(deform, common);
    deform->add_option("--n", n, "number of variables");
    deform->add_option("--lambda", lambda, "value of lambda or 'symbolic'");
    deform->add_option("--check", check_list,
                       "transversality, orthogonality, independence, positivity, limit, theorem15 (default: all)")
        ->delimiter(',');

    auto* certify = app.add_subcommand("certify", "obstruction certificate for a class (c_1..c_n)");
    add_common(certify, common);
    certify->add_option("--n", n, "number of variables (>= 2)");
    certify->add_option("--lambda", lambda, "value of lambda or 'symbolic'");
    certify->add_option("--c", c_text, "comma separated rationals c_1..c_n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Scenario s = load(common);
        if (!lambda.empty()) {
            try {
                s.params.lambda = parse_lambda(lambda);
            } catch (const std::exception& e) {
                throw UsageError(std::string("--lambda: ") + e.what());
            }
        }
        if (!c_text.empty()) {
            std::vector<Rational> c;
            for (const auto& g : parse_gauss_list(c_text, "--c")) {
                if (!g.is_real())
                    throw UsageError("--c: expected rationals");
                c.push_back(g.re());
            }
            s.params.c = c;
        }
        apply_n(s, n);

        if (*check) {
            if (!check_list.empty())
                s.checks = check_list;
            return emit(run_scenario(s, "check"), common);
        }
        if (*coh) {
            if (n)
                s.orbit = pulled_back(s);
            s.checks = {"complexes", "h1", "h1-inclusion"};
            return emit(run_scenario(s, "cohomology"), common);
        }
        if (*deform) {
            s.checks = check_list.empty() ? std::vector<std::string>{"transversality", "orthogonality", "independence",
                                                                     "positivity", "limit", "theorem15"}
                                          : check_list;
            return emit(run_scenario(s, "deform"), common);
        }
        if (*certify) {
            if (s.params.n < 2)
                throw UsageError("--n must be at least 2 for certify");
            if (s.params.c && s.params.c->size() != static_cast<std::size_t>(s.params.n))
                throw UsageError("--c: expected " + std::to_string(s.params.n) + " values");
            s.checks = {"certificate"};
            return emit(run_scenario(s, "certify"), common);
        }

        Report rep;
        rep.scenario = s.name;
        rep.seed = s.params.seed;
        if (*build) {
            rep.command = "build-ext";
            NilpotentOrbit o = pulled_back(s);
            GVec coeffs = parse_gauss_list(alpha_text, "--alpha");
            CheckResult r{"build-ext", anchor_of("build-ext"), "pass", "", json::object()};
            try {
                auto alpha = class_from_cycle_coordinates(o, coeffs);
                auto e = build_extension(o, alpha);
                auto back = class_of_extension(e);
                json doc = extension_to_json(s, e, coeffs);
                r.data["class"] = to_json(alpha.coordinates);
                r.data["lift_Q"] = e.lift_Q;
                r.data["lift_F"] = e.lift_F;
                r.detail = "class " + vector_to_string(alpha.coordinates) + ", lifts " + e.lift_Q + "/" + e.lift_F +
                           ", beta " + vector_to_string(e.beta);
                if (!(back.coordinates == alpha.coordinates)) {
                    r.status = "fail";
                    r.detail += "; class of the built extension differs";
                }
                if (!output_path.empty()) {
                    std::ofstream out(output_path);
                    if (!out)
                        throw UsageError("--output: cannot write " + output_path);
                    out << doc.dump(2) << "\n";
                } else if (common.json) {
                    r.data["extension"] = doc;
                }
            } catch (const UsageError&) {
                throw;
            } catch (const std::invalid_argument& e) {
                r.status = "fail";
                r.detail = e.what();
            }
            rep.checks.push_back(std::move(r));
            return emit(rep, common);
        }
        if (*cls) {
            rep.command = "class";
            auto file = extension_from_json(read_json_file(extension_path));
            rep.scenario = file.base.name;
            CheckResult r{"class", anchor_of("class"), "pass", "", json::object()};
            try {
                auto got = class_of_extension(file.data);
                r.data["class"] = to_json(got.coordinates);
                r.data["representative"] = to_json(got.representative);
                r.detail = "class " + vector_to_string(got.coordinates);
                GVec expected_coeffs = alpha_text.empty() ? file.alpha : parse_gauss_list(alpha_text, "--alpha");
                auto expected = class_from_cycle_coordinates(file.data.base, expected_coeffs);
                bool equal = expected.coordinates == got.coordinates;
                r.data["round_trip"] = equal;
                r.detail += equal ? "; round trip equal" : "; round trip differs from " + vector_to_string(expected.coordinates);
                if (!equal)
                    r.status = "fail";
            } catch (const std::invalid_argument& e) {
                r.status = "fail";
                r.detail = e.what();
            }
            rep.checks.push_back(std::move(r));
            return emit(rep, common);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
