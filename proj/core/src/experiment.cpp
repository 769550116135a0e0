#include "mabea/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mabea {

double best_true_cr(const GenerationSnapshot& snapshot, const EffectTable& table) {
    if (snapshot.population.empty()) {
        throw std::invalid_argument("best_true_cr: empty population");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < snapshot.fitness.size(); ++i) {
        if (snapshot.fitness[i] > snapshot.fitness[best]) {
            best = i;
        }
    }
    return true_rate(snapshot.population[best].genome, table);
}

std::vector<GenerationRecord> records_for_run(const RunResult& run, const EffectTable& table,
                                              std::uint64_t run_id) {
    std::vector<GenerationRecord> records;
    records.reserve(run.generations.size() + 1);
    std::uint64_t conversions = 0;
    std::uint64_t visits = 0;
    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    for (const auto& snap : run.generations) {
        conversions += snap.conversions;
        visits += snap.visits;
        records.push_back({run_id, snap.generation, best_true_cr(snap, table),
                           ratio(snap.conversions, snap.visits), ratio(conversions, visits)});
    }
    if (run.bai) {
        conversions += run.bai->conversions;
        visits += run.bai->visits;
        records.push_back({run_id, run.generations.size() + 1, true_rate(run.bai->winner, table),
                           ratio(run.bai->conversions, run.bai->visits),
                           ratio(conversions, visits)});
    }
    return records;
}

RunResult run_replication(const EvolutionConfig& cfg, const EffectTable& table,
                          std::uint64_t master_seed, std::uint64_t index) {
    TableEnvironment env(table);
    Rng rng(derive_seed(master_seed, index));
    return run_evolution(cfg, env, rng);
}

std::vector<GenerationRecord> run_experiment(const EvolutionConfig& cfg, const EffectTable& table,
                                             std::size_t replications, std::uint64_t master_seed,
                                             unsigned threads) {
    if (replications == 0) {
        throw std::invalid_argument("run_experiment: replications must be at least 1");
    }
    cfg.validate();
    table.validate();

    std::vector<std::vector<GenerationRecord>> per_run(replications);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= replications) return;
            try {
                per_run[r] = records_for_run(run_replication(cfg, table, master_seed, r), table, r);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(replications);
                return;
            }
        }
    };

    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, replications));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<GenerationRecord> records;
    for (auto& run : per_run) {
        records.insert(records.end(), run.begin(), run.end());
    }
    return records;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_records_csv(std::ostream& out, std::span<const GenerationRecord> records) {
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.run_id << ',' << r.generation << ',' << format_double(r.best_true_cr) << ','
            << format_double(r.overall_cr) << ',' << format_double(r.cumulative_cr) << '\n';
    }
}

std::string records_to_csv(std::span<const GenerationRecord> records) {
    std::ostringstream out;
    write_records_csv(out, records);
    return out.str();
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument("records CSV line " + std::to_string(line_no) +
                                    ": bad field '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::vector<GenerationRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("records CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsHeader) {
        throw std::invalid_argument("records CSV header mismatch: '" + line + "'");
    }
    std::vector<GenerationRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 5) {
            throw std::invalid_argument("records CSV line " + std::to_string(line_no) +
                                        ": expected 5 fields");
        }
        records.push_back({parse_field<std::uint64_t>(fields[0], line_no),
                           parse_field<std::size_t>(fields[1], line_no),
                           parse_field<double>(fields[2], line_no),
                           parse_field<double>(fields[3], line_no),
                           parse_field<double>(fields[4], line_no)});
    }
    return records;
}

std::vector<GenerationRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_records_csv(in);
}

}  // namespace mabea
