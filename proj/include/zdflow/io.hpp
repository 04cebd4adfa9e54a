#pragma once

// JSON encodings of graphs, flows, patterns and measurement specs.

#include "zdflow/finder.hpp"
#include "zdflow/flow.hpp"
#include "zdflow/graph.hpp"
#include "zdflow/meas.hpp"
#include "zdflow/oracle.hpp"
#include "zdflow/pattern.hpp"
#include "zdflow/sim.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace zdflow {

using Json = nlohmann::json;

/// {"d", "vertices", "edges": [[u, v, w]...], "inputs", "outputs", "labels": {name: [a, b]}}.
/// `d_override` supplies d for files without one; giving both is an error.
/// With `require_labels` false the labelling may be partial.
[[nodiscard]] LabelledOpenGraph graph_from_json(const Json& j, bool require_labels = true,
                                                std::optional<Zd> d_override = std::nullopt);
[[nodiscard]] Json graph_to_json(const LabelledOpenGraph& g);

/// {"C": rows, "layers": [[names...]...]} with layers[0] the last measured.
[[nodiscard]] ZdFlow flow_from_json(const Json& j, const OpenGraph& g);
[[nodiscard]] Json flow_to_json(const ZdFlow& flow, const OpenGraph& g);

/// Layers in execution order with per-vertex correction sets.
[[nodiscard]] Json schedule_to_json(const LabelledOpenGraph& g, const ZdFlow& flow);

/// {"d", "vertices", "inputs", "outputs", "order": "execution" | "product",
///  "commands": [{"op": ...}]}. With "product" the list is read right to left.
/// Correction targets may be a name or a {name: multiplicity} object and are
/// expanded into one command per vertex. Output always uses "execution".
[[nodiscard]] Pattern pattern_from_json(const Json& j);
[[nodiscard]] Json pattern_to_json(const Pattern& p);

[[nodiscard]] MeasurementSpec measurement_spec_from_json(const Json& j, const PrimeModulus& d);
[[nodiscard]] Json measurement_spec_to_json(const MeasurementSpec& spec);

[[nodiscard]] Json corrections_to_json(const CorrectionSets& c, const OpenGraph& g);
[[nodiscard]] Json oracle_report_to_json(const OracleReport& r, const OpenGraph& g);
[[nodiscard]] Json determinism_report_to_json(const DeterminismReport& r, const OpenGraph& g);

/// Parses text, mapping syntax errors to MalformedInput.
[[nodiscard]] Json parse_json(const std::string& text);
[[nodiscard]] Json read_json_file(const std::string& path);

} // namespace zdflow
