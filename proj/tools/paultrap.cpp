// Command-line front end: stability maps, cyclic-state search, g- traces,
// Berry phases, interference reports, SI estimates and the oracle suite.
//
// Exit status: 0 success, 1 numerical failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "paultrap/io.hpp"
#include "paultrap/paultrap.hpp"
#include "paultrap/verify.hpp"
#include "paultrap/wavefunction.hpp"

namespace {

using namespace paultrap;
using nlohmann::json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 9 significant digits for every emitted float.
void round_floats(json& j) {
    if (j.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", j.get<double>());
        j = std::stod(buf);
    } else if (j.is_structured()) {
        for (auto& v : j) round_floats(v);
    }
}

void emit(json j) {
    round_floats(j);
    std::cout << j.dump(2) << '\n';
}

ScanRange parse_range(const std::string& s) {
    const auto a = s.find(':'), b = s.rfind(':');
    if (a == std::string::npos || a == b) throw usage_error("range '" + s + "' is not MIN:MAX:STEP");
    try {
        return {std::stod(s.substr(0, a)), std::stod(s.substr(a + 1, b - a - 1)), std::stod(s.substr(b + 1))};
    } catch (const std::exception&) {
        throw usage_error("range '" + s + "' is not MIN:MAX:STEP");
    }
}

CisRule parse_rule(const std::string& r) { return r == "a" ? CisRule::a : CisRule::b; }

// Writes to the named file, or stdout for "" or "-".
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw usage_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

int run_verify() {
    int failures = 0;
    int id = 1;
    for (const auto& criterion : verify::all_criteria()) {
        auto r = verify::run_guarded(criterion);
        if (r.id == 0) r.id = id;
        std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << "\n     " << r.detail
                  << std::endl;
        failures += r.passed ? 0 : 1;
        ++id;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Square-wave Paul trap: Floquet stability, invariants, cyclic states and interference"};
    app.require_subcommand(1);

    auto* stability = app.add_subcommand("stability", "stability map as CSV");
    std::string range1 = "0:6.283185307:0.0314159265", range2 = range1, out_path;
    double duty = 0.25;
    unsigned threads = 0;
    stability->add_option("--omega1", range1, "omega1 tau range MIN:MAX:STEP");
    stability->add_option("--omega2", range2, "omega2 tau range MIN:MAX:STEP");
    stability->add_option("--duty", duty, "tau2 / tau")->check(CLI::Range(0.0, 0.5));
    stability->add_option("--threads", threads, "worker threads (0 = all cores)");
    stability->add_option("-o,--output", out_path, "CSV path (default stdout)");

    int l = 1, nprime = 4, n = 0;
    std::string rule = "b";
    auto* cis = app.add_subcommand("cis", "cyclic-state drive for (l, N')");
    cis->add_option("--l", l, "winding integer l")->required();
    cis->add_option("--nprime", nprime, "period count N'")->required();
    cis->add_option("--rule", rule, "phase rule")->check(CLI::IsMember({"a", "b"}));
    cis->add_option("--duty", duty, "tau2 / tau")->check(CLI::Range(0.0, 0.5));

    auto* table1 = app.add_subcommand("table1", "the four reference cyclic states as a JSON array");

    double periods = 4;
    int samples = 200;
    auto* gminus = app.add_subcommand("gminus", "g-triple trace of the Hamiltonian-matched invariant (m = 1, tau = 1)");
    gminus->add_option("--l", l)->required();
    gminus->add_option("--nprime", nprime)->required();
    gminus->add_option("--periods", periods, "trace length in drive periods")->check(CLI::PositiveNumber);
    gminus->add_option("--samples-per-period", samples)->check(CLI::PositiveNumber);
    gminus->add_option("--rule", rule)->check(CLI::IsMember({"a", "b"}));
    gminus->add_option("-o,--output", out_path, "CSV path (default stdout)");

    auto* berry = app.add_subcommand("berry", "cyclic phase -(n + 1/2) theta(tau') of level n");
    berry->add_option("--n", n, "level")->required()->check(CLI::NonNegativeNumber);
    berry->add_option("--l", l)->required();
    berry->add_option("--nprime", nprime)->required();
    berry->add_option("--rule", rule)->check(CLI::IsMember({"a", "b"}));

    std::string config_path;
    auto* interfere = app.add_subcommand("interfere", "two-path phase difference from a JSON experiment");
    interfere->add_option("--config", config_path, "experiment JSON")->required();

    double D = 0.06, d = 1e-3, v = 5e6;
    auto* estimate = app.add_subcommand("estimate", "SI drive parameters for a trap of length D");
    estimate->add_option("--D", D, "trap length (m)");
    estimate->add_option("--d", d, "electrode gap (m)");
    estimate->add_option("--v", v, "electron speed (m/s)");
    estimate->add_option("--l", l);
    estimate->add_option("--nprime", nprime);
    estimate->add_option("--rule", rule)->check(CLI::IsMember({"a", "b"}));

    std::string profile_path;
    auto* floquet = app.add_subcommand("floquet", "one-period transfer data for a JSON drive profile");
    floquet->add_option("--profile", profile_path, "profile JSON")->required();

    double t = 0;
    int density_samples = 401;
    auto* density = app.add_subcommand("density", "eigenfunction slice q,re,im,abs2 at time t (units of tau)");
    density->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    density->add_option("--l", l)->required();
    density->add_option("--nprime", nprime)->required();
    density->add_option("--t", t, "time in units of tau");
    density->add_option("--samples", density_samples)->check(CLI::Range(2, 1000000));
    density->add_option("-o,--output", out_path, "CSV path (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite; non-zero exit on failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CisSearchOptions opt;
        opt.rule = parse_rule(rule);
        opt.duty = duty;

        if (*stability) {
            const auto grid = stability_scan(parse_range(range1), parse_range(range2), duty, threads);
            Output out(out_path);
            write_stability_csv(out.stream(), grid);
        } else if (*cis) {
            emit(io::to_json(cis_search(l, nprime, opt)));
        } else if (*table1) {
            json rows = json::array();
            for (const auto& r : verify::table_rows()) {
                auto j = io::to_json(cis_search(r.l, r.nprime));
                j["row"] = std::string(1, r.label);
                rows.push_back(j);
            }
            emit(rows);
        } else if (*gminus) {
            const auto c = cis_search(l, nprime, opt);
            const auto spec = matching_coefficients(ClassicalSolution(c.profile()));
            Output out(out_path);
            io::write_g_trace_csv(out.stream(), spec, 0.0, periods, samples);
        } else if (*berry) {
            const auto c = cis_search(l, nprime, opt);
            emit({{"n", n},
                  {"l", l},
                  {"nprime", nprime},
                  {"tau_prime_over_tau", c.tau_prime_over_tau},
                  {"theta_cycle", c.theta_cycle},
                  {"winding", c.winding},
                  {"berry_phase", berry_phase(n, c.theta_cycle)},
                  {"berry_phase_over_pi", berry_phase(n, c.theta_cycle) / std::numbers::pi}});
        } else if (*interfere) {
            std::ifstream in(config_path);
            if (!in) throw usage_error("cannot read '" + config_path + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw usage_error(std::string("invalid JSON: ") + e.what());
            }
            const auto setup = build_setup(io::experiment_from_json(j));
            emit(io::to_json(setup, phase_difference(setup)));
        } else if (*estimate) {
            emit(io::to_json(estimate_si(D, d, v, l, nprime, opt.rule)));
        } else if (*floquet) {
            std::ifstream in(profile_path);
            if (!in) throw usage_error("cannot read '" + profile_path + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw usage_error(std::string("invalid JSON: ") + e.what());
            }
            const auto p = io::profile_from_json(j);
            const auto td = transfer_data(p);
            emit(io::to_json(floquet_data(td, p), td));
        } else if (*density) {
            const auto c = cis_search(l, nprime, opt);
            const auto spec = matching_coefficients(ClassicalSolution(c.profile()));
            Output out(out_path);
            write_density_csv(out.stream(), n, eigen_frame(spec, t), density_samples);
        } else if (*verify_cmd) {
            return run_verify();
        }
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const paultrap::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const paultrap::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
