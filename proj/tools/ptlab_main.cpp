#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptlab/cli.hpp"

namespace {

std::vector<int> parse_sizes(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (item.empty()) throw ptlab::ConfigError("--sizes: empty entry in '" + csv + "'");
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ptlab::ConfigError("--sizes: '" + item + "' is not an integer");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ptlab::ConfigError("cannot open output file '" + path + "'");
    out << payload;
}

ptlab::ReportFormat format_from_name(const std::string& name) {
    if (name == "json") return ptlab::ReportFormat::Json;
    if (name == "text") return ptlab::ReportFormat::Text;
    if (name == "csv") return ptlab::ReportFormat::Csv;
    throw ptlab::ConfigError("unknown format '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discretized 1D Hamiltonians with complex scalar and vector potentials: "
                 "builds the antilinear symmetry operator tau and the linear eta, verifies "
                 "the operator identities, and computes spectra."};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "json", csv_path, sizes_csv, identity_name;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config JSON path")->required();
        cmd->add_option("--out", out_path, "report output path (default: stdout)");
        cmd->add_option("--format", format, "json | text | csv (csv: spectrum only)");
    };

    CLI::App* check = app.add_subcommand("check", "run the operator-identity suite");
    add_common(check);

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigendecompose and pair the spectrum");
    add_common(spectrum);
    spectrum->add_option("--csv", csv_path, "also write the eigenvalue CSV here");

    CLI::App* converge = app.add_subcommand("converge", "grid-refinement study of one identity");
    add_common(converge);
    converge->add_option("--sizes", sizes_csv, "comma-separated odd grid sizes, e.g. 101,201,401")
        ->required();
    converge
        ->add_option("--identity", identity_name,
                     "anti_pseudo | pseudo | pt_symmetry | eta_hermiticity | "
                     "corollary1_identity | commutator_tau")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ptlab::Config cfg = ptlab::load_config(config_path);
        ptlab::Report rep;
        if (check->parsed()) {
            rep = ptlab::run_check(cfg);
        } else if (spectrum->parsed()) {
            rep = ptlab::run_spectrum(cfg);
        } else {
            ptlab::IdentityKind kind;
            if (!ptlab::identity_from_name(identity_name, &kind))
                throw ptlab::ConfigError("--identity: unknown identity '" + identity_name + "'");
            const std::vector<int> sizes = parse_sizes(sizes_csv);
            rep = ptlab::run_converge(cfg, sizes, kind);
        }
        write_output(out_path, ptlab::emit_report(rep, format_from_name(format)));
        if (spectrum->parsed() && !csv_path.empty())
            write_output(csv_path, ptlab::spectrum_csv(rep));
        return ptlab::verdict_exit_code(rep);
    } catch (const ptlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
