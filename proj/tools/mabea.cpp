// mabea: command-line front end.
//
//   mabea run       --config exp.json [--out records.csv] [--threads N]
//   mabea enumerate --table table.json
//   mabea gen-table --space 5,4,2,3,4,3,3,4 --seed 7 [--base 0.05]
//                   [--lo -0.01] [--hi 0.01] [--out table.json]
//   mabea compare   --a a.csv --b b.csv [--out report.csv]
//
// Exit status is 0 on success; any error prints one line to stderr and
// exits with 1.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mabea/compare.hpp"
#include "mabea/config.hpp"
#include "mabea/experiment.hpp"
#include "mabea/simulator.hpp"

namespace {

using namespace mabea;

std::vector<Choice> parse_space(const std::string& text) {
    std::vector<Choice> counts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad choice count '" + item + "'");
        }
        counts.push_back(static_cast<Choice>(v));
    }
    return counts;
}

std::vector<GenerationRecord> load_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open records file " + path);
    }
    return read_records_csv(in);
}

/// Writes to `path`, or stdout when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit-allocated evolutionary conversion-rate optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int threads = -1;
    auto* run = app.add_subcommand("run", "Run an experiment config and write records CSV");
    run->add_option("--config", config_path, "Experiment JSON")->required();
    run->add_option("--out", out_path, "Records CSV (default: stdout)");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)");

    std::string table_path;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "Summarize every design of a table");
    enumerate_cmd->add_option("--table", table_path, "Effect table JSON")->required();

    std::string space_text;
    std::uint64_t seed = 0;
    double base = 0.05;
    double lo = -0.01;
    double hi = 0.01;
    auto* gen = app.add_subcommand("gen-table", "Generate a random effect table");
    gen->add_option("--space", space_text, "Comma-separated choice counts")->required();
    gen->add_option("--seed", seed, "Generator seed")->required();
    gen->add_option("--base", base, "Base conversion rate");
    gen->add_option("--lo", lo, "Lowest effect");
    gen->add_option("--hi", hi, "Highest effect");
    gen->add_option("--out", out_path, "Table JSON (default: stdout)");

    std::string a_path;
    std::string b_path;
    auto* cmp = app.add_subcommand("compare", "Welch-test two records CSVs per generation");
    cmp->add_option("--a", a_path, "Records CSV A")->required();
    cmp->add_option("--b", b_path, "Records CSV B")->required();
    cmp->add_option("--out", out_path, "Report CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            ExperimentSpec spec = load_experiment(config_path);
            if (threads >= 0) spec.threads = static_cast<unsigned>(threads);
            const auto records = run_experiment(spec.evolution, spec.table, spec.replications,
                                                spec.master_seed, spec.threads);
            emit(out_path, [&](std::ostream& out) { write_records_csv(out, records); });
        } else if (*enumerate_cmd) {
            const EffectTable table = load_table(table_path);
            const EnumerationSummary s = enumerate(table);
            std::cout << "design_count " << s.design_count << '\n'
                      << "mean_rate " << format_double(s.mean_rate) << '\n'
                      << "best_rate " << format_double(s.best_rate) << '\n'
                      << "best_genome";
            for (const Choice c : s.best_genome.choices()) std::cout << ' ' << c;
            std::cout << '\n';
        } else if (*gen) {
            const EffectTable table =
                generate_table(SearchSpace(parse_space(space_text)), base, lo, hi, seed);
            emit(out_path, [&](std::ostream& out) { out << table_to_json(table); });
        } else if (*cmp) {
            const auto report = compare(load_records(a_path), load_records(b_path));
            emit(out_path, [&](std::ostream& out) { write_report_csv(out, report); });
        }
    } catch (const std::exception& ex) {
        std::cerr << "mabea: error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
