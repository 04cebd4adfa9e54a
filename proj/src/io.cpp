#include "zdflow/io.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace zdflow {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        malformed(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

std::string name_of(const Json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_number_integer()) {
        return std::to_string(j.get<std::int64_t>());
    }
    malformed("vertex names must be strings or integers, got " + j.dump());
}

std::vector<std::string> names_of(const Json& j) {
    if (!j.is_array()) {
        malformed("expected an array of vertex names, got " + j.dump());
    }
    std::vector<std::string> out;
    for (const auto& e : j) {
        out.push_back(name_of(e));
    }
    return out;
}

std::int64_t integer_of(const Json& j) {
    if (!j.is_number_integer()) {
        malformed("expected an integer, got " + j.dump());
    }
    return j.get<std::int64_t>();
}

Zd nonnegative(const Json& j, const PrimeModulus& d) {
    const std::int64_t v = integer_of(j);
    if (v < 0) {
        malformed("negative value " + std::to_string(v));
    }
    return d.reduce(v);
}

PrimeModulus modulus_of(const Json& j, std::optional<Zd> d_override) {
    const bool in_file = j.is_object() && j.contains("d");
    if (in_file && d_override) {
        malformed("d is given by the file; an override is not accepted");
    }
    if (!in_file && !d_override) {
        malformed("missing field 'd'");
    }
    const std::int64_t d = in_file ? integer_of(j.at("d")) : *d_override;
    if (d < 2) {
        throw Error(ErrorCode::NonPrimeModulus, std::to_string(d) + " is not prime");
    }
    return PrimeModulus(static_cast<Zd>(d));
}

PauliLabel label_of(const Json& j, const PrimeModulus& d) {
    if (!j.is_array() || j.size() != 2) {
        malformed("labels are [a, b] pairs, got " + j.dump());
    }
    return {nonnegative(j[0], d), nonnegative(j[1], d)};
}

Json label_json(PauliLabel l) { return Json::array({l.a, l.b}); }

Json set_json(const OpenGraph& g, const VertexSet& s) { return g.names_of(s); }

VertexId lookup(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + name + "'");
    }
    return static_cast<VertexId>(it - names.begin());
}

VertexSet lookup_set(const std::vector<std::string>& names, const Json& j) {
    std::vector<VertexId> ids;
    for (const auto& n : names_of(j)) {
        ids.push_back(lookup(names, n));
    }
    return make_vertex_set(std::move(ids));
}

Json multiset_json(const Multiset& m, const OpenGraph& g) {
    Json out = Json::object();
    for (VertexId u = 0; u < m.size(); ++u) {
        if (m[u] != 0) {
            out[g.name(u)] = m[u];
        }
    }
    return out;
}

} // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        malformed("cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

LabelledOpenGraph graph_from_json(const Json& j, bool require_labels, std::optional<Zd> d_override) {
    const PrimeModulus d = modulus_of(j, d_override);
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) {
                malformed("edges are [u, v, weight] triples, got " + e.dump());
            }
            edges.push_back({name_of(e[0]), name_of(e[1]), integer_of(e[2])});
        }
    }
    OpenGraph g(d, names_of(field(j, "vertices")), edges, j.contains("inputs") ? names_of(j.at("inputs")) : std::vector<std::string>{},
                j.contains("outputs") ? names_of(j.at("outputs")) : std::vector<std::string>{});
    Labelling labels(g.size());
    if (j.contains("labels")) {
        const Json& l = j.at("labels");
        if (!l.is_object()) {
            malformed("labels must be an object keyed by vertex name");
        }
        for (const auto& [name, value] : l.items()) {
            labels[g.id(name)] = label_of(value, d);
        }
    }
    return {std::move(g), std::move(labels), require_labels};
}

Json graph_to_json(const LabelledOpenGraph& lg) {
    const OpenGraph& g = lg.graph();
    Json edges = Json::array();
    for (const auto& [u, v, w] : g.edges()) {
        edges.push_back(Json::array({g.name(u), g.name(v), w}));
    }
    Json labels = Json::object();
    for (VertexId v = 0; v < g.size(); ++v) {
        if (lg.labels()[v]) {
            labels[g.name(v)] = label_json(*lg.labels()[v]);
        }
    }
    return {{"d", g.modulus().value()},     {"vertices", g.names()},
            {"edges", edges},               {"inputs", set_json(g, g.inputs())},
            {"outputs", set_json(g, g.outputs())}, {"labels", labels}};
}

ZdFlow flow_from_json(const Json& j, const OpenGraph& g) {
    const Json& rows = field(j, "C");
    const std::size_t n = g.size();
    if (!rows.is_array() || rows.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "C must have one row per vertex");
    }
    FieldMatrix c(g.modulus(), n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!rows[r].is_array() || rows[r].size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "C must be square");
        }
        for (std::size_t col = 0; col < n; ++col) {
            c.set(r, col, nonnegative(rows[r][col], g.modulus()));
        }
    }
    std::vector<VertexSet> layers;
    for (const auto& layer : field(j, "layers")) {
        layers.push_back(g.ids(names_of(layer)));
    }
    return {std::move(c), std::move(layers)};
}

Json flow_to_json(const ZdFlow& flow, const OpenGraph& g) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < flow.correction.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < flow.correction.cols(); ++c) {
            row.push_back(flow.correction(r, c));
        }
        rows.push_back(row);
    }
    Json layers = Json::array();
    for (const auto& layer : flow.layers) {
        layers.push_back(set_json(g, layer));
    }
    return {{"C", rows}, {"layers", layers}};
}

Json schedule_to_json(const LabelledOpenGraph& lg, const ZdFlow& flow) {
    const OpenGraph& g = lg.graph();
    const CorrectionSets c = corrections(lg, flow);
    Json rounds = Json::array();
    for (std::size_t k = flow.layers.size(); k-- > 1;) {
        Json round = Json::array();
        for (VertexId v : flow.layers[k]) {
            round.push_back({{"vertex", g.name(v)},
                             {"x", multiset_json(c.x.at(v), g)},
                             {"z", multiset_json(c.z.at(v), g)}});
        }
        rounds.push_back(round);
    }
    return {{"depth", depth(flow)}, {"rounds", rounds}, {"outputs", set_json(g, flow.layers.front())}};
}

Pattern pattern_from_json(const Json& j) {
    const PrimeModulus d = modulus_of(j, std::nullopt);
    const Json& commands = field(j, "commands");
    if (!commands.is_array()) {
        malformed("commands must be an array");
    }
    std::vector<Json> ordered(commands.begin(), commands.end());
    const std::string order = j.value("order", std::string("execution"));
    if (order == "product") {
        std::reverse(ordered.begin(), ordered.end());
    } else if (order != "execution") {
        malformed("order must be 'execution' or 'product'");
    }

    std::vector<std::string> names;
    if (j.contains("vertices")) {
        names = names_of(j.at("vertices"));
    } else {
        const auto add = [&](const Json& n) { names.push_back(name_of(n)); };
        for (const char* key : {"inputs", "outputs"}) {
            if (j.contains(key)) {
                for (const auto& n : j.at(key)) {
                    add(n);
                }
            }
        }
        for (const auto& c : ordered) {
            for (const char* key : {"vertex", "u", "v", "signal"}) {
                if (c.contains(key)) {
                    add(c.at(key));
                }
            }
            if (c.contains("target")) {
                if (c.at("target").is_object()) {
                    for (const auto& [n, m] : c.at("target").items()) {
                        names.push_back(n);
                    }
                } else {
                    add(c.at("target"));
                }
            }
        }
    }
    std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) { return canonical_less(a, b); });
    names.erase(std::unique(names.begin(), names.end()), names.end());

    Pattern p{d, names, j.contains("inputs") ? lookup_set(names, j.at("inputs")) : VertexSet{},
              j.contains("outputs") ? lookup_set(names, j.at("outputs")) : VertexSet{}, {}};
    const auto vertex = [&](const Json& c, const char* key) { return lookup(names, name_of(field(c, key))); };
    for (const auto& c : ordered) {
        const std::string op = field(c, "op").get<std::string>();
        if (op == "N") {
            p.commands.push_back(Command::n(vertex(c, "vertex")));
        } else if (op == "E") {
            const Zd w = c.contains("weight") ? nonnegative(c.at("weight"), d) : 1;
            p.commands.push_back(Command::e(vertex(c, "u"), vertex(c, "v"), w));
        } else if (op == "M") {
            const PauliLabel l = label_of(field(c, "label"), d);
            if (l.is_zero()) {
                throw Error(ErrorCode::ZeroLabel, "measurement label (0,0)");
            }
            std::vector<double> angles;
            if (c.contains("angles")) {
                angles = c.at("angles").get<std::vector<double>>();
                if (angles.size() + 1 != d.value()) {
                    malformed("a measurement needs d-1 angles");
                }
            }
            p.commands.push_back(Command::m(vertex(c, "vertex"), l, std::move(angles)));
        } else if (op == "X" || op == "Z") {
            const VertexId signal = vertex(c, "signal");
            const Zd power = c.contains("power") ? nonnegative(c.at("power"), d) : 1;
            const Json& target = field(c, "target");
            std::vector<std::pair<VertexId, Zd>> targets;
            if (target.is_object()) {
                for (const auto& [n, m] : target.items()) {
                    targets.emplace_back(lookup(names, n), d.mul(power, nonnegative(m, d)));
                }
            } else {
                targets.emplace_back(lookup(names, name_of(target)), power);
            }
            for (const auto& [u, e] : targets) {
                p.commands.push_back(op == "X" ? Command::x(u, signal, e) : Command::z(u, signal, e));
            }
        } else {
            malformed("unknown command '" + op + "'");
        }
    }
    return p;
}

Json pattern_to_json(const Pattern& p) {
    Json commands = Json::array();
    for (const Command& c : p.commands) {
        switch (c.kind) {
        case CommandKind::N:
            commands.push_back({{"op", "N"}, {"vertex", p.names[c.u]}});
            break;
        case CommandKind::E:
            commands.push_back({{"op", "E"}, {"u", p.names[c.u]}, {"v", p.names[c.v]}, {"weight", c.power}});
            break;
        case CommandKind::M: {
            Json m = {{"op", "M"}, {"vertex", p.names[c.u]}, {"label", label_json(c.label)}};
            if (!c.angles.empty()) {
                m["angles"] = c.angles;
            }
            commands.push_back(m);
            break;
        }
        case CommandKind::X:
        case CommandKind::Z:
            commands.push_back({{"op", to_string(c.kind)},
                                {"target", p.names[c.u]},
                                {"signal", p.names[c.v]},
                                {"power", c.power}});
            break;
        }
    }
    Json inputs = Json::array();
    Json outputs = Json::array();
    for (VertexId v : p.inputs) {
        inputs.push_back(p.names[v]);
    }
    for (VertexId v : p.outputs) {
        outputs.push_back(p.names[v]);
    }
    return {{"d", p.modulus.value()}, {"vertices", p.names}, {"inputs", inputs},
            {"outputs", outputs},     {"order", "execution"}, {"commands", commands}};
}

MeasurementSpec measurement_spec_from_json(const Json& j, const PrimeModulus& d) {
    MeasurementSpec spec{label_of(field(j, "label"), d), field(j, "angles").get<std::vector<double>>()};
    if (spec.label.is_zero()) {
        throw Error(ErrorCode::ZeroLabel, "measurement label (0,0)");
    }
    if (spec.angles.size() + 1 != d.value()) {
        malformed("a measurement needs d-1 angles");
    }
    return spec;
}

Json measurement_spec_to_json(const MeasurementSpec& spec) {
    return {{"label", label_json(spec.label)}, {"angles", spec.angles}};
}

Json corrections_to_json(const CorrectionSets& c, const OpenGraph& g) {
    Json x = Json::object();
    Json z = Json::object();
    for (const auto& [v, m] : c.x) {
        x[g.name(v)] = multiset_json(m, g);
    }
    for (const auto& [v, m] : c.z) {
        z[g.name(v)] = multiset_json(m, g);
    }
    return {{"x", x}, {"z", z}};
}

Json oracle_report_to_json(const OracleReport& r, const OpenGraph& g) {
    Json out = {{"exists", r.exists}};
    out["min_depth"] = r.min_depth ? Json(*r.min_depth) : Json(nullptr);
    if (r.delayed_layers) {
        Json layers = Json::array();
        for (const auto& layer : *r.delayed_layers) {
            layers.push_back(set_json(g, layer));
        }
        out["delayed_layers"] = layers;
    } else {
        out["delayed_layers"] = nullptr;
    }
    out["witness"] = r.witness ? flow_to_json(*r.witness, g) : Json(nullptr);
    return out;
}

Json determinism_report_to_json(const DeterminismReport& r, const OpenGraph& g) {
    Json order = Json::array();
    for (VertexId v : r.order) {
        order.push_back(g.name(v));
    }
    Json out = {{"verdict", to_string(r.verdict)},
                {"seed", r.seed},
                {"branches", r.branches},
                {"runs", r.runs},
                {"min_fidelity", r.min_fidelity},
                {"max_probability_deviation", r.max_probability_deviation},
                {"probabilities", r.probabilities},
                {"order", order}};
    out["failing_prefix"] = r.failing_prefix ? Json(*r.failing_prefix) : Json(nullptr);
    return out;
}

} // namespace zdflow
