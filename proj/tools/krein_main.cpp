#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "krein/commands.hpp"
#include "krein/config.hpp"
#include "krein/errors.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw krein::ConfigError("cannot open output file '" + out_path + "'", "--out");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"krein: bound states and tunneling splittings of point and curve interactions"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    int quad_order = 0;
    double tol = 0;
    for (const char* name : {"solve", "split", "sweep", "wavefunction"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config")->required();
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--quad-order", quad_order, "curve quadrature order");
        sub->add_option("--tol", tol, "root tolerance");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0) return 0;
        krein::ConfigError ce(std::string("command line: ") + e.what());
        std::cerr << krein::error_json(ce) << "\n";
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        krein::RunConfig c = krein::load_config(config_path);
        if (quad_order != 0 || tol != 0) {
            if (quad_order != 0) {
                if (quad_order < 2 || quad_order > 512)
                    throw krein::ConfigError("--quad-order must lie in [2, 512]", "--quad-order");
                c.quad_order = quad_order;
            }
            if (tol != 0) {
                if (!(tol > 0 && tol <= 1e-2)) throw krein::ConfigError("--tol must lie in (0, 1e-2]", "--tol");
                c.tol = tol;
            }
        }
        std::string text;
        if (cmd == "solve")
            text = krein::cmd_solve(c);
        else if (cmd == "split")
            text = krein::cmd_split(c);
        else if (cmd == "sweep")
            text = krein::cmd_sweep(c, krein::thread_count());
        else
            text = krein::cmd_wavefunction(c);
        emit(text, out_path);
    } catch (const std::exception& e) {
        std::cerr << krein::error_json(e) << "\n";
        return krein::exit_code_for(e);
    }
    return 0;
}
