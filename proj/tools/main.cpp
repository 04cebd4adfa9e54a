// zdflow command-line tool: find, verify and simulate Z_d-flows and patterns.
//
// JSON goes to stdout, a human summary to stderr. Exit status: 0 on success,
// 1 on usage or input errors, 2 when the checked property fails.

#include "zdflow/error.hpp"
#include "zdflow/finder.hpp"
#include "zdflow/flow.hpp"
#include "zdflow/io.hpp"
#include "zdflow/oracle.hpp"
#include "zdflow/pattern.hpp"
#include "zdflow/sim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace zdflow;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPropertyFail = 2;

struct Options {
    std::uint64_t seed = 0;
    std::size_t draws = 20;
    std::size_t inputs = 5;
    std::size_t max_branches = 729;
    bool compact = false;
    bool quiet = false;
    std::optional<Zd> d_override;
    std::string first;
    std::string second;
};

struct Loaded {
    Json json;
    std::string digest;
};

// FNV-1a over the raw file bytes; only used to tag reports.
std::string digest_of(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Loaded load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return {parse_json(buf.str()), digest_of(buf.str())};
}

bool is_pattern(const Json& j) { return j.is_object() && j.contains("commands"); }

class Reporter {
public:
    Reporter(std::string subcommand, const Options& o) : opts_(o), start_(std::chrono::steady_clock::now()) {
        report_["subcommand"] = std::move(subcommand);
    }

    Json& report() { return report_; }

    void say(const std::string& line) const {
        if (!opts_.quiet) {
            std::cerr << line << '\n';
        }
    }

    int finish(int status) {
        report_["exit"] = status;
        std::cout << (opts_.compact ? report_.dump() : report_.dump(2)) << '\n';
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        say("elapsed " + std::to_string(ms) + " ms");
        return status;
    }

private:
    const Options& opts_;
    Json report_;
    std::chrono::steady_clock::time_point start_;
};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        out += (out.empty() ? "" : " ") + n;
    }
    return "{" + out + "}";
}

void describe_schedule(const Reporter& r, const LabelledOpenGraph& lg, const ZdFlow& flow) {
    const OpenGraph& g = lg.graph();
    const CorrectionSets c = corrections(lg, flow);
    r.say("depth " + std::to_string(depth(flow)));
    std::size_t round = 1;
    for (std::size_t k = flow.layers.size(); k-- > 1;) {
        r.say("round " + std::to_string(round++) + ": " + join(g.names_of(flow.layers[k])));
        for (VertexId v : flow.layers[k]) {
            std::string line = "  " + g.name(v) + "  x:";
            for (VertexId u = 0; u < g.size(); ++u) {
                if (c.x.at(v)[u] != 0) {
                    line += " " + g.name(u) + "^" + std::to_string(c.x.at(v)[u]);
                }
            }
            line += "  z:";
            for (VertexId u = 0; u < g.size(); ++u) {
                if (c.z.at(v)[u] != 0) {
                    line += " " + g.name(u) + "^" + std::to_string(c.z.at(v)[u]);
                }
            }
            r.say(line);
        }
    }
    r.say("unmeasured: " + join(g.names_of(flow.layers.front())));
}

int cmd_find(const Options& o) {
    Reporter r("find", o);
    const Loaded file = load(o.first);
    r.report()["input_digest"] = file.digest;
    const LabelledOpenGraph lg = graph_from_json(file.json, true, o.d_override);
    const FinderResult result = find_flow(lg);
    r.report()["stats"] = {{"rounds", result.stats.rounds},
                           {"systems", result.stats.systems_solved},
                           {"row_operations", result.stats.elimination.row_operations},
                           {"field_operations", result.stats.elimination.field_operations}};
    if (!result.found()) {
        r.report()["status"] = "no-flow";
        r.report()["stuck"] = lg.graph().names_of(result.stuck);
        r.say("no Z_d-flow; stuck vertices " + join(lg.graph().names_of(result.stuck)));
        return r.finish(kPropertyFail);
    }
    r.report()["status"] = "found";
    r.report()["flow"] = flow_to_json(*result.flow, lg.graph());
    r.report()["schedule"] = schedule_to_json(lg, *result.flow);
    describe_schedule(r, lg, *result.flow);
    return r.finish(kOk);
}

int cmd_find_any(const Options& o) {
    Reporter r("find-any-labelling", o);
    const Loaded file = load(o.first);
    r.report()["input_digest"] = file.digest;
    const LabelledOpenGraph partial = graph_from_json(file.json, false, o.d_override);
    const AnyLabellingResult any = find_flow_any_labelling(partial.graph(), partial.labels());
    if (!any.result.found()) {
        r.report()["status"] = "no-flow";
        r.report()["stuck"] = partial.graph().names_of(any.result.stuck);
        r.say("no Z_d-flow for any labelling; stuck vertices " + join(partial.graph().names_of(any.result.stuck)));
        return r.finish(kPropertyFail);
    }
    const LabelledOpenGraph lg(partial.graph(), any.labels);
    r.report()["status"] = "found";
    r.report()["graph"] = graph_to_json(lg);
    r.report()["flow"] = flow_to_json(*any.result.flow, lg.graph());
    r.report()["schedule"] = schedule_to_json(lg, *any.result.flow);
    describe_schedule(r, lg, *any.result.flow);
    return r.finish(kOk);
}

// A flow file may be a bare flow or the output of `find`.
ZdFlow flow_of(const Json& j, const OpenGraph& g) {
    if (j.contains("flow")) {
        return flow_from_json(j.at("flow"), g);
    }
    return flow_from_json(j, g);
}

int cmd_verify(const Options& o) {
    Reporter r("verify", o);
    const Loaded graph_file = load(o.first);
    const Loaded flow_file = load(o.second);
    r.report()["input_digest"] = graph_file.digest + ":" + flow_file.digest;
    const LabelledOpenGraph lg = graph_from_json(graph_file.json, true, o.d_override);
    const ZdFlow flow = flow_of(flow_file.json, lg.graph());
    const FlowValidity v = validate_flow(lg, flow);
    r.report()["valid"] = v.valid;
    r.report()["violated"] = to_string(v.violated);
    if (v.witness) {
        r.report()["witness"] = {lg.graph().name(v.witness->first), lg.graph().name(v.witness->second)};
    }
    r.report()["message"] = v.message;
    if (v.valid) {
        r.report()["depth"] = depth(flow);
        r.say("valid Z_d-flow of depth " + std::to_string(depth(flow)));
        return r.finish(kOk);
    }
    r.say("invalid: " + v.message);
    return r.finish(kPropertyFail);
}

struct Program {
    LabelledOpenGraph graph;
    CorrectionSets corrections;
    std::vector<VertexId> order;
    std::map<VertexId, std::vector<double>> angles;
};

// Either a pattern file alone, a graph alone (flow found on the fly) or a
// graph plus flow file.
Program program_of(const Options& o, Reporter& r) {
    const Loaded first = load(o.first);
    std::string digest = first.digest;
    if (is_pattern(first.json)) {
        Pattern p = pattern_from_json(first.json);
        if (!is_standard_form(p)) {
            p = standardize(p);
            r.say("pattern standardised before extraction");
        }
        ExtractedPattern e = extract_open_graph(p);
        r.report()["input_digest"] = digest;
        return {std::move(e.graph), std::move(e.corrections), std::move(e.order), std::move(e.angles)};
    }
    LabelledOpenGraph lg = graph_from_json(first.json, true, o.d_override);
    const auto flow_for = [&]() -> ZdFlow {
        if (o.second.empty()) {
            const FinderResult found = find_flow(lg);
            if (!found.found()) {
                throw Error(ErrorCode::InvalidFlow, "graph has no Z_d-flow and no flow file was given");
            }
            r.say("using the flow found by the finder");
            return *found.flow;
        }
        const Loaded second = load(o.second);
        digest += ":" + second.digest;
        return flow_of(second.json, lg.graph());
    };
    const ZdFlow flow = flow_for();
    r.report()["input_digest"] = digest;
    CorrectionSets c = corrections(lg, flow);
    std::vector<VertexId> order = measurement_order(lg, flow);
    return {std::move(lg), std::move(c), std::move(order), {}};
}

int cmd_classify(const Options& o) {
    Reporter r("classify", o);
    const Program prog = program_of(o, r);
    ClassifyConfig config;
    config.seed = o.seed;
    config.draws = o.draws;
    config.inputs = o.inputs;
    config.max_branches = o.max_branches;
    config.order = prog.order;
    const DeterminismReport report = classify_determinism(prog.graph, prog.corrections, config);
    r.report()["report"] = determinism_report_to_json(report, prog.graph.graph());
    r.report()["seed"] = o.seed;
    r.say("verdict: " + to_string(report.verdict) + " (" + std::to_string(report.branches) + " branches, " +
          std::to_string(report.runs) + " runs, min fidelity " + std::to_string(report.min_fidelity) + ")");
    return r.finish(report.verdict == Verdict::RobustEvidence ? kOk : kPropertyFail);
}

int cmd_simulate(const Options& o) {
    Reporter r("simulate", o);
    const Program prog = program_of(o, r);
    const OpenGraph& g = prog.graph.graph();
    std::size_t branches = 1;
    for (std::size_t k = 0; k < prog.order.size(); ++k) {
        branches *= g.modulus().value();
        if (branches > o.max_branches) {
            throw Error(ErrorCode::TooManyBranches, "branch count exceeds --max-branches");
        }
    }
    std::mt19937_64 rng(o.seed);
    MeasurementChoice measurements = random_measurements(prog.graph, rng);
    for (const auto& [v, angles] : prog.angles) {
        measurements[v] = measurement_unitary({prog.graph.label(v), angles}, g.modulus());
    }
    const QuditState input = QuditState::random(g.modulus(), input_register(g, false), rng);
    const auto all = enumerate_branches(prog.graph, prog.corrections, measurements, prog.order, input);
    Json rows = Json::array();
    double total = 0.0;
    double min_fid = 1.0;
    for (const auto& b : all) {
        std::string outcome;
        for (VertexId v : prog.order) {
            outcome += std::to_string(b.outcomes.at(v));
        }
        total += b.probability;
        if (b.probability > 1e-12) {
            min_fid = std::min(min_fid, fidelity(all.front().output, b.output));
        }
        rows.push_back({{"outcome", outcome}, {"probability", b.probability}});
    }
    r.report()["seed"] = o.seed;
    r.report()["branches"] = rows;
    r.report()["total_probability"] = total;
    r.report()["min_fidelity_to_first"] = min_fid;
    r.say(std::to_string(all.size()) + " branches, total probability " + std::to_string(total) +
          ", min fidelity to the all-zero branch " + std::to_string(min_fid));
    return r.finish(kOk);
}

int cmd_oracle(const Options& o) {
    Reporter r("oracle", o);
    const Loaded file = load(o.first);
    r.report()["input_digest"] = file.digest;
    const LabelledOpenGraph lg = graph_from_json(file.json, true, o.d_override);
    const OracleReport oracle = run_oracle(lg);
    const FinderResult found = find_flow(lg);
    r.report()["oracle"] = oracle_report_to_json(oracle, lg.graph());
    bool agree = oracle.exists == found.found();
    if (agree && found.found()) {
        agree = oracle.min_depth == depth(*found.flow) && oracle.delayed_layers == found.flow->layers;
    }
    r.report()["finder_agrees"] = agree;
    r.say(oracle.exists ? "flow exists, minimal depth " + std::to_string(*oracle.min_depth) : "no flow exists");
    if (!agree) {
        r.say("finder disagrees with the oracle");
        return r.finish(kPropertyFail);
    }
    return r.finish(kOk);
}

int cmd_standardize(const Options& o) {
    Reporter r("standardize", o);
    const Loaded file = load(o.first);
    r.report()["input_digest"] = file.digest;
    const Pattern p = pattern_from_json(file.json);
    const RunnableCheck check = check_runnable(p);
    if (!check) {
        r.report()["runnable"] = false;
        r.report()["index"] = *check.index;
        r.report()["reason"] = check.reason;
        r.say("not runnable at command " + std::to_string(*check.index) + ": " + check.reason);
        return r.finish(kPropertyFail);
    }
    const Pattern s = standardize(p);
    r.report()["runnable"] = true;
    r.report()["pattern"] = pattern_to_json(s);
    r.say(std::to_string(p.commands.size()) + " commands in, " + std::to_string(s.commands.size()) + " out");
    return r.finish(kOk);
}

int cmd_extract(const Options& o) {
    Reporter r("extract", o);
    const Loaded file = load(o.first);
    r.report()["input_digest"] = file.digest;
    Pattern p = pattern_from_json(file.json);
    if (!is_standard_form(p)) {
        p = standardize(p);
        r.say("pattern standardised before extraction");
    }
    const ExtractedPattern e = extract_open_graph(p);
    const OpenGraph& g = e.graph.graph();
    Json order = Json::array();
    for (VertexId v : e.order) {
        order.push_back(g.name(v));
    }
    r.report()["graph"] = graph_to_json(e.graph);
    r.report()["corrections"] = corrections_to_json(e.corrections, g);
    r.report()["order"] = order;
    r.say(std::to_string(g.size()) + " vertices, " + std::to_string(e.order.size()) + " measurements");
    return r.finish(kOk);
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidFlow:
    case ErrorCode::NotRunnable:
    case ErrorCode::CyclicDependency:
    case ErrorCode::OrderViolation:
        return kPropertyFail;
    default:
        return kUsage;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Z_d-flow finder, verifier and measurement-pattern simulator"};
    app.require_subcommand(1);
    Options o;
    std::int64_t d_override = 0;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--draws", o.draws, "random measurement draws");
        sub->add_option("--inputs", o.inputs, "random input states per draw");
        sub->add_option("--max-branches", o.max_branches, "cap on d^|O^c|");
        sub->add_flag("--json", o.compact, "single-line JSON output");
        sub->add_flag("--quiet", o.quiet, "no summary on stderr");
        sub->add_option("--d-override", d_override, "dimension for graph files without \"d\"");
    };

    struct Entry {
        const char* name;
        const char* help;
        bool two_files;
        bool second_optional;
        int (*run)(const Options&);
    };
    const Entry entries[] = {
        {"find", "find a maximally delayed Z_d-flow", false, false, cmd_find},
        {"find-any-labelling", "find a flow, choosing labels for unlabelled vertices", false, false, cmd_find_any},
        {"verify", "check a flow against a graph", true, false, cmd_verify},
        {"classify", "classify determinism of a flow or pattern by simulation", true, true, cmd_classify},
        {"simulate", "run every branch of a flow or pattern once", true, true, cmd_simulate},
        {"oracle", "brute-force existence and depth, compared with the finder", false, false, cmd_oracle},
        {"standardize", "rewrite a pattern into standard form", false, false, cmd_standardize},
        {"extract", "read the labelled graph and corrections from a pattern", false, false, cmd_extract},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("file", o.first, "graph or pattern JSON")->required();
        if (e.two_files) {
            auto* opt = sub->add_option("second", o.second, "flow JSON");
            if (!e.second_optional) {
                opt->required();
            }
        }
        common(sub);
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? kOk : kUsage;
    }
    if (d_override != 0) {
        if (d_override < 0) {
            std::cerr << "--d-override must be positive\n";
            return kUsage;
        }
        o.d_override = static_cast<Zd>(d_override);
    }

    try {
        for (const auto& [sub, entry] : subs) {
            if (sub->parsed()) {
                return entry->run(o);
            }
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        std::cout << Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
