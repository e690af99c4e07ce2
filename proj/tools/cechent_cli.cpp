// Command-line front end: cechent <subcommand> --scenario FILE | --builtin NAME

#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cechent/cechent.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolated = 2;
constexpr int kExitInconclusive = 3;

struct Options {
    std::string scenario;
    std::string builtin;
    std::string format = "structured";
    int nmax = 0;
    int window = -1;
    std::string out;
};

std::vector<cechent::Scenario> resolve(const Options& o) {
    if (o.scenario.empty() == o.builtin.empty()) throw cechent::ValidationError("give exactly one of --scenario or --builtin");
    std::vector<cechent::Scenario> out;
    if (!o.scenario.empty()) {
        out.push_back(cechent::load_scenario(o.scenario));
    } else if (o.builtin == "all") {
        for (const auto& name : cechent::builtin_catalog()) out.push_back(cechent::builtin_scenario(name));
    } else {
        out.push_back(cechent::builtin_scenario(o.builtin));
    }
    for (auto& s : out) {
        if (o.nmax != 0) {
            if (o.nmax < 2) throw cechent::ValidationError("--nmax must be at least 2");
            s.analysis.n_max = static_cast<std::size_t>(o.nmax);
        }
        if (o.window >= 0) s.analysis.window = o.window;
    }
    return out;
}

void write(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw cechent::ValidationError("cannot write '" + o.out + "'");
    f << text;
}

int run_verdicts(const Options& o) {
    const auto scenarios = resolve(o);
    // independent scenarios run concurrently; output keeps catalog order
    std::vector<std::future<cechent::VerdictReport>> jobs;
    for (const auto& s : scenarios) jobs.push_back(std::async(std::launch::async, [&s] { return cechent::run_verdict(s); }));
    std::vector<cechent::VerdictReport> reports;
    for (auto& j : jobs) reports.push_back(j.get());

    std::string text;
    if (o.format == "tabular") {
        text = cechent::kTabularHeader;
        for (const auto& r : reports) text += cechent::tabular_row(r);
    } else if (reports.size() == 1) {
        text = cechent::emit_report(reports.front(), cechent::ReportFormat::Structured);
    } else {
        cechent::Json all = cechent::Json::array();
        for (const auto& r : reports) all.push_back(cechent::report_json(r));
        text = all.dump(2) + "\n";
    }
    write(o, text);

    int code = kExitOk;
    for (const auto& r : reports) {
        if (r.verdict == cechent::Verdict::Violated) code = kExitViolated;
        else if (r.verdict == cechent::Verdict::Inconclusive && code == kExitOk) code = kExitInconclusive;
    }
    return code;
}

template <class Builder>
int run_report(const Options& o, Builder build) {
    const auto scenarios = resolve(o);
    cechent::Json doc;
    if (scenarios.size() == 1) {
        doc = build(scenarios.front());
    } else {
        doc = cechent::Json::array();
        for (const auto& s : scenarios) doc.push_back(build(s));
    }
    write(o, o.format == "tabular" ? cechent::flatten_tabular(doc) : doc.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cover homology, entropy and fiber entropy of finite dynamical models"};
    app.require_subcommand(1);
    Options o;

    struct Command {
        const char* name;
        const char* help;
    };
    const std::vector<Command> commands{
        {"homology", "nerve homology and cohomology of every cover and raw complex"},
        {"entropy", "cover entropy sequences, L_d and fiber entropy"},
        {"spectral", "induced maps on homology and their spectra"},
        {"fiber", "fiber nerves, inclusion and axiom audits, eigenchain witness"},
        {"verdict", "compare fiber entropy with the log spectral radius"},
        {"audit", "duality, purity, fiber inclusion, eigen-sup chain, carrier independence"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        auto* src = sub->add_option("--scenario", o.scenario, "scenario JSON file");
        sub->add_option("--builtin", o.builtin, "builtin scenario, e.g. shift:k=2,depth=3, or 'all'")->excludes(src);
        sub->add_option("--format", o.format, "structured or tabular")->check(CLI::IsMember({"structured", "tabular"}));
        sub->add_option("--nmax", o.nmax, "number of join levels for entropy");
        sub->add_option("--window", o.window, "fiber window N");
        sub->add_option("--out", o.out, "write the report to this file");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (subs[0]->parsed()) return run_report(o, cechent::homology_report);
        if (subs[1]->parsed()) return run_report(o, cechent::entropy_report);
        if (subs[2]->parsed()) return run_report(o, cechent::spectral_report);
        if (subs[3]->parsed()) return run_report(o, cechent::fiber_report);
        if (subs[4]->parsed()) return run_verdicts(o);
        return run_report(o, cechent::audit_report);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
