// Copyright 2026 The QSignal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsignal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qsignal/errors.hpp"
#include "qsignal/protocols.hpp"
#include "qsignal/report_io.hpp"

namespace qsignal::cli {

namespace {

using Json = nlohmann::ordered_json;

// Human-readable summaries; serialized output keeps full precision.
std::string display(double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

struct OutputOptions {
    std::string format;
    std::string path;
    bool emit_trials = false;
    unsigned workers = 1;
};

void add_output_options(CLI::App &cmd, OutputOptions &opts) {
    cmd.add_option("--format", opts.format, "Machine-readable output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd.add_option("-o,--output", opts.path, "Write machine-readable output to this file");
    cmd.add_flag("--emit-trials", opts.emit_trials, "Include per-trial records in JSON output");
    cmd.add_option("--workers", opts.workers, "Worker threads for trial execution (0 = all cores)")
        ->capture_default_str();
}

void add_seed_option(CLI::App &cmd, std::uint64_t &seed) {
    cmd.add_option("--seed", seed, "Master random seed")->envname(kSeedEnv)->capture_default_str();
}

unsigned resolve_workers(unsigned requested) {
    return requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
}

// Writes machine output. Returns true when it went to `out`, in which case the
// human summary is suppressed.
bool emit(const OutputOptions &opts, const std::string &json_text, const std::string &csv_text,
          std::ostream &out) {
    if (opts.path.empty() && opts.format.empty()) {
        return false;
    }
    const std::string &text = opts.format == "csv" ? csv_text : json_text;
    if (opts.path.empty()) {
        out << text;
        return true;
    }
    std::ofstream file(opts.path);
    if (!file) {
        throw Error(ErrorKind::InvalidParameter, "cannot open output file " + opts.path);
    }
    file << text;
    return false;
}

struct Protocol1Command {
    Protocol1Params params;
    OutputOptions output;

    int run(std::ostream &out) const {
        auto report = run_protocol1(params, resolve_workers(output.workers));
        bool machine_only = emit(output, to_json(report, output.emit_trials).dump(2) + "\n",
                                 to_csv(report.trials), out);
        if (machine_only) {
            return kExitOk;
        }
        out << "protocol1: |A> -> " << (params.sender_acts ? "measure |+><+| -> " : "")
            << "measure |B><B|   basis (A, B)\n"
            << "  trials                 " << params.n_trials << "\n"
            << "  analytic P(B)          " << display(report.analytic_probability) << "\n"
            << "  empirical P(B)         " << display(report.empirical_probability) << "  ("
            << report.detections << " detections)\n"
            << "  4-sigma band           +/- " << display(report.confidence_halfwidth) << "\n"
            << "  ensemble_success(" << params.n_particles << ")    "
            << display(report.analytic_ensemble_success) << "  (empirical "
            << display(report.empirical_ensemble_success) << ")\n"
            << "  ||[P+, PB]||_F         " << display(report.commutator_norm) << "\n";
        return kExitOk;
    }
};

struct Protocol2Command {
    Protocol2Params params;
    OutputOptions output;
    bool lambda_scan_requested = false;

    int run(std::ostream &out, std::ostream &err) const {
        validate(params);
        if (params.sigma_bar < 10.0 * params.sigma) {
            err << "warning: sigma_bar (" << display(params.sigma_bar) << ") < 10*sigma ("
                << display(10.0 * params.sigma) << "); the collapsed packet is not much wider\n";
        }
        auto report = run_protocol2(params, resolve_workers(output.workers));
        std::vector<LambdaPoint> table;
        if (lambda_scan_requested) {
            table = lambda_scan(params);
        }
        bool machine_only = emit(output, to_json(report, output.emit_trials, table).dump(2) + "\n",
                                 to_csv(report.trials), out);
        if (machine_only) {
            return kExitOk;
        }
        out << "protocol2: Gaussian sigma=" << display(params.sigma)
            << (params.sender_acts ? " -> momentum measurement (sigma_bar=" + display(params.sigma_bar) + ")"
                                   : std::string(" (sender idle)"))
            << " -> detect in [" << display(params.d - params.k) << ", " << display(params.d + params.k)
            << "]\n"
            << "  trials                 " << params.n_trials << "\n"
            << "  P_before               " << display(report.p_before) << "\n"
            << "  P_after                " << display(report.p_after) << "\n"
            << "  gap                    " << display(report.p_after - report.p_before) << "\n"
            << "  empirical P(detect)    " << display(report.empirical_probability) << "  ("
            << report.detections << " detections, 4-sigma band +/- " << display(report.confidence_halfwidth)
            << ")\n"
            << "  max lambda deviation   " << display(report.max_lambda_deviation) << "\n";
        if (!table.empty()) {
            double worst = 0.0;
            out << "  lambda scan:\n"
                << "    " << std::setw(24) << std::left << "lambda" << std::setw(24) << "P_after"
                << "deviation\n";
            for (const auto &p : table) {
                out << "    " << std::setw(24) << display(p.lambda) << std::setw(24)
                    << display(p.p_after) << display(p.deviation) << "\n";
                worst = std::max(worst, p.deviation);
            }
            out << std::right << "  max scan deviation     " << display(worst) << "\n";
        }
        return kExitOk;
    }
};

struct ScanCommand {
    std::string parameter = "sigma-bar";
    double from = 10.0;
    double to = 1000.0;
    int steps = 50;
    Protocol2Params base;
    OutputOptions output;

    int run(std::ostream &out) const {
        if (steps < 2) {
            throw Error(ErrorKind::InvalidParameter, "steps must be >= 2");
        }
        if (!(to > from)) {
            throw Error(ErrorKind::InvalidParameter, "scan range needs --to > --from");
        }
        std::vector<ScanRow> rows;
        rows.reserve(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            double value = from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
            Protocol2Params p = base;
            if (parameter == "sigma-bar") {
                p.sigma_bar = value;
            } else if (parameter == "sigma") {
                p.sigma = value;
            } else if (parameter == "d") {
                p.d = value;
            } else {
                p.k = value;
            }
            rows.push_back({value, p, analyze_protocol2(p)});
        }
        OutputOptions opts = output;
        if (opts.format.empty()) {
            opts.format = "csv";
        }
        std::string csv = to_csv(parameter, rows);
        bool machine_only = emit(opts, to_json(parameter, rows).dump(2) + "\n", csv, out);
        if (!machine_only) {
            out << "scan: " << rows.size() << " rows of " << parameter << " written to " << opts.path << "\n";
        }
        return kExitOk;
    }
};

struct AuditCommand {
    std::string pair = "paper";
    int count = 100;
    std::uint64_t seed = 42;
    double tol = kTolerance;
    OutputOptions output;

    int run(std::ostream &out) const {
        if (!(tol > 0.0)) {
            throw Error(ErrorKind::InvalidParameter, "tol must be positive");
        }
        return pair == "paper" ? run_paper(out) : run_random(out);
    }

    int run_paper(std::ostream &out) const {
        const auto p = paper_pair();
        const Operator comm = commutator(p.sender, p.receiver);
        const Operator expected =
            Complex(0.5) * (outer(state_at_a(), state_at_b()) - outer(state_at_b(), state_at_a()));
        const double distance = frobenius_distance(comm, expected);
        const auto record = commutation_audit(p.sender, p.receiver, p.initial, tol);
        const AuditRow row{0, 2, record, std::abs(record.marginal_difference) >= tol && !record.premise_holds};

        Json json;
        json["params"] = {{"pair", pair}, {"tol", tol}};
        json["analytic"] = {{"pairs", Json::array({audit_row_json(row)})}};
        json["empirical"] = Json::object();
        json["diagnostics"] = {{"basis", Json::array({"A", "B"})},
                               {"commutator", operator_json(comm)},
                               {"expected_commutator", operator_json(expected)},
                               {"frobenius_distance", distance},
                               {"matches_expected", distance < tol}};
        if (emit(output, json.dump(2) + "\n", to_csv(std::vector<AuditRow>{row}), out)) {
            return kExitOk;
        }
        out << "audit (paper pair): sender |+><+|, receiver |B><B|, initial |A>, basis (A, B)\n"
            << "  [P+, PB] = [[" << display(comm(0, 0).real()) << ", " << display(comm(0, 1).real())
            << "], [" << display(comm(1, 0).real()) << ", " << display(comm(1, 1).real()) << "]]\n"
            << "  expected 1/2(|A><B| - |B><A|), Frobenius distance " << display(distance)
            << (distance < tol ? "  (match)" : "  (MISMATCH)") << "\n"
            << "  ||[A,B]||_F            " << display(record.commutator_norm) << "\n"
            << "  premise [A,B]=0 holds  " << (record.premise_holds ? "yes" : "no") << "\n"
            << "  P(B | A measured)      " << display(record.p_receiver_sender_measured) << "\n"
            << "  P(B | A idle)          " << display(record.p_receiver_sender_idle) << "\n"
            << "  marginal difference    " << display(record.marginal_difference) << "\n";
        return kExitOk;
    }

    int run_random(std::ostream &out) const {
        if (count < 1) {
            throw Error(ErrorKind::InvalidParameter, "count must be >= 1 for random pair modes");
        }
        const bool commuting = pair == "random-commuting";
        std::vector<AuditRow> rows;
        rows.reserve(static_cast<std::size_t>(count));
        std::size_t passed = 0;
        for (int i = 0; i < count; ++i) {
            auto rng = RandomStream::for_trial(seed, static_cast<std::uint64_t>(i));
            auto p = commuting ? random_commuting_pair(rng) : random_projector_pair(rng);
            auto record = commutation_audit(p.sender, p.receiver, p.initial, tol);
            bool no_signal = std::abs(record.marginal_difference) < tol;
            // Commuting pairs must not signal; others are only checked when the premise holds.
            bool ok = commuting ? (record.premise_holds && no_signal) : (!record.premise_holds || no_signal);
            passed += ok ? 1 : 0;
            rows.push_back({static_cast<std::size_t>(i), p.sender.dimension(), record, ok});
        }

        Json json;
        json["params"] = {{"pair", pair}, {"count", count}, {"seed", seed}, {"tol", tol}};
        Json records = Json::array();
        for (const auto &row : rows) {
            records.push_back(audit_row_json(row));
        }
        json["analytic"] = {{"pairs", std::move(records)}};
        json["empirical"] = Json::object();
        json["diagnostics"] = {{"passed", passed}, {"total", rows.size()}};
        if (emit(output, json.dump(2) + "\n", to_csv(rows), out)) {
            return kExitOk;
        }
        out << "audit (" << pair << "): " << count << " pairs, seed " << seed << "\n"
            << "  " << std::setw(6) << std::left << "pair" << std::setw(5) << "dim" << std::setw(26)
            << "||[A,B]||_F" << std::setw(9) << "premise" << std::setw(26) << "marginal difference"
            << "ok\n";
        for (const auto &row : rows) {
            out << "  " << std::setw(6) << row.index << std::setw(5) << row.dimension << std::setw(26)
                << display(row.record.commutator_norm) << std::setw(9)
                << (row.record.premise_holds ? "holds" : "fails") << std::setw(26)
                << display(row.record.marginal_difference) << (row.passed ? "yes" : "NO") << "\n";
        }
        out << std::right << "  passed " << passed << "/" << rows.size() << "\n";
        return kExitOk;
    }
};

void add_protocol2_options(CLI::App &cmd, Protocol2Params &p) {
    cmd.add_option("--sigma", p.sigma, "Initial packet width")->capture_default_str();
    cmd.add_option("--sigma-bar", p.sigma_bar, "Post-measurement packet width")->capture_default_str();
    cmd.add_option("--d", p.d, "Distance from sender to receiver")->capture_default_str();
    cmd.add_option("--k", p.k, "Half-width of the receiver's detector")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulate and audit two measurement-based signalling protocols"};
    app.require_subcommand(1);

    Protocol1Command p1;
    auto *cmd1 = app.add_subcommand("protocol1", "Nonlocal-projector protocol on a two-site particle");
    cmd1->add_option("--trials", p1.params.n_trials, "Number of trials")->capture_default_str();
    add_seed_option(*cmd1, p1.params.seed);
    cmd1->add_flag("--sender-acts,!--sender-idle", p1.params.sender_acts,
                   "Whether the sender measures |+><+| (default: acts)");
    cmd1->add_option("--particles", p1.params.n_particles, "Particles per trial for the ensemble statistic")
        ->capture_default_str();
    add_output_options(*cmd1, p1.output);

    Protocol2Command p2;
    auto *cmd2 = app.add_subcommand("protocol2", "Momentum-measurement spreading protocol");
    add_protocol2_options(*cmd2, p2.params);
    cmd2->add_option("--trials", p2.params.n_trials, "Number of trials")->capture_default_str();
    add_seed_option(*cmd2, p2.params.seed);
    cmd2->add_flag("--sender-acts,!--sender-idle", p2.params.sender_acts,
                   "Whether the sender measures momentum (default: acts)");
    cmd2->add_flag("--lambda-scan", p2.lambda_scan_requested,
                   "Evaluate P_after at lambda in {-3,-1,0,1,3}/(sigma*sqrt(2))");
    add_output_options(*cmd2, p2.output);

    ScanCommand scan;
    auto *cmd3 = app.add_subcommand("scan", "Closed-form detection probabilities over a parameter range");
    cmd3->add_option("--param", scan.parameter, "Parameter to scan")
        ->check(CLI::IsMember({"sigma-bar", "sigma", "d", "k"}))
        ->capture_default_str();
    cmd3->add_option("--from", scan.from, "Range start")->capture_default_str();
    cmd3->add_option("--to", scan.to, "Range end")->capture_default_str();
    cmd3->add_option("--steps", scan.steps, "Number of grid points")->capture_default_str();
    add_protocol2_options(*cmd3, scan.base);
    add_output_options(*cmd3, scan.output);

    AuditCommand audit;
    auto *cmd4 = app.add_subcommand("audit", "Check the commutation premise against exact receiver marginals");
    cmd4->add_option("--pair", audit.pair, "Projector pair selector")
        ->check(CLI::IsMember({"paper", "random-commuting", "random"}))
        ->capture_default_str();
    cmd4->add_option("--count", audit.count, "Number of random pairs")->capture_default_str();
    add_seed_option(*cmd4, audit.seed);
    cmd4->add_option("--tol", audit.tol, "Commutator norm threshold")->capture_default_str();
    add_output_options(*cmd4, audit.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    }

    try {
        if (cmd1->parsed()) {
            return p1.run(out);
        }
        if (cmd2->parsed()) {
            return p2.run(out, err);
        }
        if (cmd3->parsed()) {
            return scan.run(out);
        }
        return audit.run(out);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidationError;
    }
}

}  // namespace qsignal::cli
