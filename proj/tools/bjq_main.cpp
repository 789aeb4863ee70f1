// Command-line front end: quantize classical observables under the
// Born-Jordan, Weyl and symmetric rules, inspect the squared-angular-
// momentum discrepancy, and run the action / propagator convergence
// studies with CSV output.

#include "bjq/actions.hpp"
#include "bjq/kernels.hpp"
#include "bjq/observable_parser.hpp"
#include "bjq/quantize.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace bjq;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

ClassicalPoly potential_from_text(const std::string& text) {
    if (text == "ho") return ClassicalPoly::monomial(1, {2}, {0}, Rational(1, 2));
    if (text == "quartic") return ClassicalPoly::monomial(1, {4}, {0});
    if (text == "free") return ClassicalPoly::zero(1);
    ClassicalPoly v = parse_observable(text);
    if (v.uses_momentum()) throw ParseError("potential must depend on x only", 1);
    return v.with_dims(1);
}

std::vector<double> parse_time_grid(const std::string& text) {
    if (text.empty()) return geometric_time_grid();
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    for (double t : out)
        if (!(t > 0.0)) throw ParseError("time grid entries must be positive", 1);
    return out;
}

int run_quantize(const std::string& rule, const std::string& expr) {
    const ClassicalPoly h = parse_observable(expr);
    std::map<std::string, OperatorPoly> results;
    if (rule == "bj" || rule == "all") results.emplace("bj", quantize_born_jordan(h));
    if (rule == "weyl" || rule == "all") results.emplace("weyl", quantize_weyl(h));
    if (rule == "sym" || rule == "all") results.emplace("sym", quantize_symmetric(h));
    for (const char* name : {"bj", "weyl", "sym"}) {
        auto it = results.find(name);
        if (it != results.end()) std::cout << name << ": " << it->second.to_string() << "\n";
    }
    if (rule == "all") {
        std::cout << "weyl - bj: " << (results.at("weyl") - results.at("bj")).to_string() << "\n";
        std::cout << "weyl - sym: " << (results.at("weyl") - results.at("sym")).to_string() << "\n";
        std::cout << "bj - sym: " << (results.at("bj") - results.at("sym")).to_string() << "\n";
    }
    return 0;
}

int run_dilemma() {
    const AngularMomentumReport rep = angular_momentum_report();
    std::cout << "per-component: " << rep.perComponent.to_string()
              << ", total: " << rep.total.to_string() << "\n";
    return 0;
}

struct StudyFlags {
    std::string potential = "ho";
    std::string tGrid;
    double mass = 1.0;
    double hbar = 1.0;
    double xMin = -8.0;
    double xMax = 8.0;
    int nPoints = 512;
};

int run_action_study(const StudyFlags& flags, double x, double xp) {
    const ClassicalPoly vPoly = potential_from_text(flags.potential);
    const HamiltonianSpec spec =
        HamiltonianSpec::kinetic_potential({flags.mass}, Potential::from_poly(vPoly), flags.hbar);
    const std::vector<double> tGrid = parse_time_grid(flags.tGrid);
    auto reports = action_error_study(spec, {x}, {xp}, tGrid);
    for (const char* key : {"sbar", "s1", "s2"}) {
        write_csv(std::cout,
                  {{"builder", key},
                   {"potential", flags.potential},
                   {"x", format_g17(x)},
                   {"xp", format_g17(xp)},
                   {"hbar", format_g17(flags.hbar)},
                   {"m", format_g17(flags.mass)}},
                  reports.at(key));
    }
    for (const char* key : {"sbar", "s1", "s2"})
        if (!reports.at(key).skipped.empty()) return kExitNumerical;
    return 0;
}

int run_prop_study(const StudyFlags& flags, const std::string& builderName) {
    const Grid1D grid(flags.xMin, flags.xMax, flags.nPoints);
    const ClassicalPoly vPoly = potential_from_text(flags.potential);
    const ScalarPotential v = ScalarPotential::from_poly(vPoly);
    const double m = flags.mass, hbar = flags.hbar;

    KernelBuilder builder;
    if (builderName == "ks")
        builder = [=](double t) { return ks_kernel(grid, t, m, v, hbar); };
    else if (builderName == "vv")
        builder = [=](double t) { return vanvleck_kernel(v, m, grid, t, hbar); };
    else if (builderName == "mid1")
        builder = [=](double t) { return midpoint_kernel(grid, t, m, v, hbar, 1); };
    else if (builderName == "mid2")
        builder = [=](double t) { return midpoint_kernel(grid, t, m, v, hbar, 2); };
    else
        throw CLI::ValidationError("--builder", "unknown builder '" + builderName + "'");

    const ExactEvolver oracle(grid, m, v, hbar);
    const WaveFunction psi0 = unit_gaussian(grid);
    const std::vector<double> tGrid = parse_time_grid(flags.tGrid);
    auto reports = wavefunction_error_study({{builderName, builder}}, psi0, tGrid, oracle);
    const ConvergenceReport& rep = reports.at(builderName);

    std::ostringstream gridText;
    gridText << "[" << format_g17(flags.xMin) << "," << format_g17(flags.xMax) << "]x"
             << flags.nPoints;
    write_csv(std::cout,
              {{"builder", builderName},
               {"potential", flags.potential},
               {"grid", gridText.str()},
               {"hbar", format_g17(hbar)},
               {"m", format_g17(m)}},
              rep);
    if (rep.fittedCount == 0 && !rep.skipped.empty()) return kExitNumerical;
    return 0;
}

int run_compose(const StudyFlags& flags, const std::string& builderName, std::size_t steps,
                double t) {
    const Grid1D grid(flags.xMin, flags.xMax, flags.nPoints);
    const ClassicalPoly vPoly = potential_from_text(flags.potential);
    const ScalarPotential v = ScalarPotential::from_poly(vPoly);
    const double m = flags.mass, hbar = flags.hbar;

    KernelBuilder builder;
    if (builderName == "ks")
        builder = [=](double dt) { return ks_kernel(grid, dt, m, v, hbar); };
    else if (builderName == "vv")
        builder = [=](double dt) { return vanvleck_kernel(v, m, grid, dt, hbar); };
    else if (builderName == "mid1")
        builder = [=](double dt) { return midpoint_kernel(grid, dt, m, v, hbar, 1); };
    else if (builderName == "mid2")
        builder = [=](double dt) { return midpoint_kernel(grid, dt, m, v, hbar, 2); };
    else
        throw CLI::ValidationError("--builder", "unknown builder '" + builderName + "'");

    const WaveFunction psi0 = unit_gaussian(grid);
    const WaveFunction composed = compose_steps(builder, steps, t, psi0);
    const ExactEvolver oracle(grid, m, v, hbar);
    const WaveFunction exact = oracle.evolve(psi0, t);
    const std::complex<double> overlap = inner_product(exact, composed);
    std::cout << "norm=" << format_g17(composed.norm()) << "\n";
    std::cout << "fidelity=" << format_g17(std::abs(overlap)) << "\n";
    std::cout << "l2-error=" << format_g17(l2_distance(composed, exact)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Born-Jordan quantization workbench and short-time propagator laboratory"};
    app.require_subcommand(1);

    std::string rule = "all", expr;
    CLI::App* quantize = app.add_subcommand("quantize", "quantize a classical observable");
    quantize->add_option("--rule", rule, "bj | weyl | sym | all")
        ->check(CLI::IsMember({"bj", "weyl", "sym", "all"}));
    quantize->add_option("expr", expr, "observable expression")->required();

    app.add_subcommand("dilemma", "Weyl - BJ differences for the squared angular momentum");

    StudyFlags flags;
    double x = 1.0, xp = 0.0, composeT = 0.5;
    std::size_t composeSteps = 8;
    std::string builderName = "ks";

    auto addCommon = [&](CLI::App* cmd, bool withGrid) {
        cmd->add_option("--potential", flags.potential, "ho | quartic | free | <expr in x>");
        cmd->add_option("--t-grid", flags.tGrid, "comma-separated times (default 0.2*2^-k, k=0..7)");
        cmd->add_option("--mass", flags.mass, "particle mass");
        cmd->add_option("--hbar", flags.hbar, "Planck constant");
        if (withGrid) {
            cmd->add_option("--xmin", flags.xMin, "box lower edge");
            cmd->add_option("--xmax", flags.xMax, "box upper edge");
            cmd->add_option("--npoints", flags.nPoints, "grid points");
        }
    };

    CLI::App* action = app.add_subcommand("action-study", "action approximation errors vs t (CSV)");
    addCommon(action, false);
    action->add_option("--x", x, "final position")->required();
    action->add_option("--xp", xp, "initial position")->required();

    CLI::App* prop = app.add_subcommand("prop-study", "one-step propagator errors vs t (CSV)");
    addCommon(prop, true);
    prop->add_option("--builder", builderName, "ks | vv | mid1 | mid2")->required();

    CLI::App* compose = app.add_subcommand("compose", "multi-step propagation vs the exact evolver");
    addCommon(compose, true);
    compose->add_option("--builder", builderName, "ks | vv | mid1 | mid2");
    compose->add_option("--steps", composeSteps, "number of kernel applications");
    compose->add_option("--t", composeT, "total evolution time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("quantize")) return run_quantize(rule, expr);
        if (app.got_subcommand("dilemma")) return run_dilemma();
        if (app.got_subcommand("action-study")) return run_action_study(flags, x, xp);
        if (app.got_subcommand("prop-study")) return run_prop_study(flags, builderName);
        if (app.got_subcommand("compose")) return run_compose(flags, builderName, composeSteps, composeT);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
