// Command-line front end. Talks to the core exclusively through the C API
// in heismod.h; reports go to stdout as JSON, plot data to --csv files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heismod.h"

namespace {

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { hm_string_free(ptr); }
};

int finish(hm_status status, const OwnedString& report, int all_pass) {
    if (status != HM_OK) {
        std::cerr << "error: " << hm_status_name(status) << ": " << hm_last_error()
                  << "\n";
        return status == HM_ERR_INVALID_ARGUMENT || status == HM_ERR_UNKNOWN_MAP ||
                       status == HM_ERR_SPEC_PARSE ||
                       status == HM_ERR_K_OUT_OF_RANGE
                   ? 2
                   : 3;
    }
    if (report.ptr) std::cout << report.ptr << "\n";
    return all_pass ? 0 : 1;
}

bool write_file(const std::string& path, const char* text) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    out << (text ? text : "");
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heisenberg-group surface-modulus toolkit"};
    app.require_subcommand(1);

    double a = 1.0, b = 2.718281828459045, k = 0.5;
    int quad_n = 0, samples = 1000;
    unsigned long long seed = 1;
    std::string map_name = "identity", spec_path, rho = "none", csv_path;
    bool flow = false;

    CLI::App* mod_cones =
        app.add_subcommand("mod-cones", "Modulus of the cone foliation, three ways");
    mod_cones->add_option("--a", a, "inner ring radius")->required();
    mod_cones->add_option("--b", b, "outer ring radius")->required();
    mod_cones->add_option("--quad-n", quad_n, "tensor quadrature order override");

    CLI::App* verify = app.add_subcommand(
        "verify-stretch", "Verify the radial-stretch extremality data");
    verify->add_option("--k", k, "stretch parameter in (0,1)")->required();
    verify->add_option("--a", a, "inner ring radius");
    verify->add_option("--b", b, "outer ring radius");
    verify->add_option("--csv", csv_path, "write psi vs leaf distortion CSV");

    CLI::App* contact = app.add_subcommand(
        "contact-check", "Contact-condition residual statistics for a map");
    contact->add_option("--map", map_name, "registry map name")->required();
    contact->add_option("--samples", samples, "number of ring samples");
    contact->add_option("--seed", seed, "sampling seed");

    CLI::App* surface =
        app.add_subcommand("surface", "Analyze a surface from a JSON spec file");
    surface->add_option("--spec", spec_path, "path to the surface spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    surface->add_option("--rho", rho, "density: none, rho23 or rho2");
    surface->add_flag("--flow", flow, "emit horizontal flow lines");
    surface->add_option("--csv", csv_path, "write flow-line CSV to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    OwnedString report;
    int all_pass = 0;

    if (mod_cones->parsed()) {
        const hm_status s =
            hm_cmd_mod_cones(a, b, quad_n, &report.ptr, &all_pass);
        return finish(s, report, all_pass);
    }

    if (verify->parsed()) {
        OwnedString csv;
        const hm_status s = hm_cmd_verify_stretch(
            k, a, b, &report.ptr, csv_path.empty() ? nullptr : &csv.ptr, &all_pass);
        if (s == HM_OK && !csv_path.empty() && !write_file(csv_path, csv.ptr))
            return 3;
        return finish(s, report, all_pass);
    }

    if (contact->parsed()) {
        const hm_status s = hm_cmd_contact_check(map_name.c_str(), samples, seed,
                                                 &report.ptr, &all_pass);
        return finish(s, report, all_pass);
    }

    if (surface->parsed()) {
        std::ifstream in(spec_path);
        std::string spec_json((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
        OwnedString csv;
        const hm_status s =
            hm_cmd_surface(spec_json.c_str(), rho.c_str(), flow ? 1 : 0,
                           &report.ptr, flow ? &csv.ptr : nullptr, &all_pass);
        if (s == HM_OK && flow && !csv_path.empty() && !write_file(csv_path, csv.ptr))
            return 3;
        return finish(s, report, all_pass);
    }

    return 2;
}
