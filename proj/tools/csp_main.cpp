#include "csp/bnc.hpp"
#include "csp/instance.hpp"
#include "csp/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoSolution = 2;

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

struct SolveArgs {
    std::string instance;
    int k = 7;
    std::string mode = "IFhX";
    double time_limit = 3600.0;
    double epsilon = 1.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string svg;
};

int cmd_solve(const SolveArgs &a)
{
    const csp::Instance inst = csp::parse_tsplib_file(a.instance);
    const csp::CoverageModel cov = csp::build_coverage(inst, a.k);
    csp::SolverConfig cfg;
    cfg.mode = csp::parse_mode(a.mode);
    cfg.time_limit = a.time_limit;
    cfg.epsilon = a.epsilon;
    cfg.seed = a.seed;
    const csp::SolveResult res = csp::solve(inst, cov, cfg);
    const csp::RunReport rep = csp::make_report(inst, a.k, cfg.mode, res);
    const std::string text = csp::to_json(rep).dump(2) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        write_text(a.out, text);
    if (!a.svg.empty() && !rep.tour.empty())
        write_text(a.svg, csp::render_svg(inst, rep));
    const bool solved = res.status == csp::SolveStatus::Optimal || res.status == csp::SolveStatus::Feasible;
    return solved ? kExitOk : kExitNoSolution;
}

struct BenchArgs {
    std::string dir;
    std::vector<int> ks{7, 9, 11};
    std::vector<std::string> modes{"I", "IFvp", "IFvpX", "IFh", "IFhX"};
    double time_limit = 3600.0;
    double epsilon = 1.0;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out = "bench.json";
};

int cmd_bench(const BenchArgs &a)
{
    std::vector<fs::path> files;
    if (fs::is_directory(a.dir))
        for (const auto &entry : fs::directory_iterator(a.dir))
            if (entry.is_regular_file() && entry.path().extension() == ".tsp")
                files.push_back(entry.path());
    if (files.empty()) {
        std::cerr << "no .tsp instances in " << a.dir << "\n";
        return kExitError;
    }
    std::vector<csp::Mode> modes;
    for (const auto &m : a.modes)
        modes.push_back(csp::parse_mode(m));

    std::vector<csp::Instance> instances;
    for (const auto &f : files)
        instances.push_back(csp::parse_tsplib_file(f));
    std::sort(instances.begin(), instances.end(),
              [](const csp::Instance &x, const csp::Instance &y) { return x.name() < y.name(); });

    struct Task {
        std::size_t inst;
        int k;
        csp::Mode mode;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (int k : a.ks)
            for (auto m : modes)
                tasks.push_back({i, k, m});

    std::vector<csp::RunReport> reports(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            const Task &task = tasks[t];
            try {
                const csp::Instance &inst = instances[task.inst];
                const csp::CoverageModel cov = csp::build_coverage(inst, task.k);
                csp::SolverConfig cfg;
                cfg.mode = task.mode;
                cfg.time_limit = a.time_limit;
                cfg.epsilon = a.epsilon;
                cfg.seed = a.seed;
                reports[t] = csp::make_report(inst, task.k, task.mode, csp::solve(inst, cov, cfg));
            } catch (const std::exception &e) {
                errors[t] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::max(1, a.jobs); ++j)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();

    for (std::size_t t = 0; t < tasks.size(); ++t)
        if (!errors[t].empty()) {
            std::cerr << instances[tasks[t].inst].name() << " k=" << tasks[t].k << ": " << errors[t] << "\n";
            return kExitError;
        }

    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : reports)
        arr.push_back(csp::to_json(r));
    write_text(a.out, arr.dump(2) + "\n");
    std::cout << csp::bench_table(reports);
    return kExitOk;
}

struct PlotArgs {
    std::string report;
    std::string instance;
    std::string out;
};

int cmd_plot(const PlotArgs &a)
{
    std::ifstream in(a.report);
    if (!in)
        throw std::runtime_error("cannot read " + a.report);
    const csp::RunReport rep = csp::report_from_json(nlohmann::json::parse(in));
    if (rep.tour.empty()) {
        std::cerr << "report has no tour\n";
        return kExitNoSolution;
    }
    const csp::Instance inst = csp::parse_tsplib_file(a.instance);
    const std::string svg = csp::render_svg(inst, rep);
    if (a.out.empty())
        std::cout << svg;
    else
        write_text(a.out, svg);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Covering salesman branch and cut"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto *solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("--instance", sa.instance, "TSPLIB .tsp file")->required();
    solve->add_option("--k", sa.k, "covering neighbours per vertex");
    solve->add_option("--mode", sa.mode, "I, IFvp, IFvpX, IFh or IFhX");
    solve->add_option("--time-limit", sa.time_limit, "seconds");
    solve->add_option("--epsilon", sa.epsilon, "first-found violation threshold");
    solve->add_option("--seed", sa.seed, "heuristic seed");
    solve->add_option("--out", sa.out, "report JSON path (stdout when absent)");
    solve->add_option("--svg", sa.svg, "tour plot path");

    BenchArgs ba;
    auto *bench = app.add_subcommand("bench", "solve every instance of a directory in every mode");
    bench->add_option("--dir", ba.dir, "directory of .tsp files")->required();
    bench->add_option("--k", ba.ks, "k values")->delimiter(',');
    bench->add_option("--modes", ba.modes, "modes")->delimiter(',');
    bench->add_option("--time-limit", ba.time_limit, "seconds per solve");
    bench->add_option("--epsilon", ba.epsilon, "first-found violation threshold");
    bench->add_option("--seed", ba.seed, "heuristic seed");
    bench->add_option("--jobs", ba.jobs, "parallel solves");
    bench->add_option("--out", ba.out, "report array path");

    PlotArgs pa;
    auto *plot = app.add_subcommand("plot", "render a report's tour as SVG");
    plot->add_option("--report", pa.report, "report JSON")->required();
    plot->add_option("--instance", pa.instance, "TSPLIB .tsp file")->required();
    plot->add_option("--out", pa.out, "SVG path (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*solve)
            return cmd_solve(sa);
        if (*bench)
            return cmd_bench(ba);
        return cmd_plot(pa);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
