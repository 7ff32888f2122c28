#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "metric_center/csg.hpp"
#include "metric_center/finite_space.hpp"
#include "metric_center/grid_region.hpp"
#include "metric_center/interval_set.hpp"

namespace metric_center {

/// Malformed spec text or content, with a source location when one is known
/// (line and column are 1-based; 0 means unknown).
class SpecError : public std::runtime_error {
public:
    SpecError(const std::string& what, std::size_t line, std::size_t column, std::string pointer)
        : std::runtime_error(what), line(line), column(column), pointer(std::move(pointer)) {}
    std::size_t line, column;
    std::string pointer;  // JSON pointer of the offending value
};

struct LineAmbient {
    IntervalSet set = IntervalSet::real_line();
    friend bool operator==(const LineAmbient&, const LineAmbient&) = default;
};

struct MatrixAmbient {
    Eigen::MatrixXd dist;
    double h = 1;
};

struct GraphAmbient {
    Eigen::Index vertices = 0;
    std::vector<WeightedEdge> edges;
    std::optional<double> h;
    bool allow_disconnected = false;
};

struct PointAmbient {
    Eigen::MatrixXd points;
    PointMetric metric = PointMetric::euclidean;
    double h = 1;
};

struct GridAmbient {
    std::vector<double> lo, hi;
    double h = 1;
    friend bool operator==(const GridAmbient&, const GridAmbient&) = default;
};

bool operator==(const MatrixAmbient& a, const MatrixAmbient& b);
bool operator==(const GraphAmbient& a, const GraphAmbient& b);
bool operator==(const PointAmbient& a, const PointAmbient& b);

using AmbientSpec = std::variant<LineAmbient, MatrixAmbient, GraphAmbient, PointAmbient, GridAmbient>;

enum class Engine { line, finite, grid };
Engine engine_of(const AmbientSpec& a);
std::string engine_name(Engine e);

/// Which fields are meaningful depends on the engine of the referenced space:
/// `set` for the line, `indices` and `view` for finite spaces, `shape` for grids.
struct SubsetSpec {
    std::string space;
    IntervalSet set;
    std::vector<Eigen::Index> indices;
    std::vector<Eigen::Index> view;  // empty: the whole space
    nlohmann::json shape;
    friend bool operator==(const SubsetSpec&, const SubsetSpec&) = default;
};

struct TaskSpec {
    std::string command;  // analyze | product | union | inscribe | filtrate
    std::vector<std::string> subsets;
    std::optional<double> h;
    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct SpecDocument {
    std::map<std::string, AmbientSpec> spaces;
    std::map<std::string, SubsetSpec> subsets;
    std::vector<TaskSpec> tasks;
    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Strict parse: unknown or duplicate keys, dangling references, malformed
/// rationals and rational literals in float-regime spaces are errors.
/// Relative "csv"/"edge_list" paths resolve against base_dir.
SpecDocument parse_spec(const std::string& text, const std::string& base_dir = ".");
/// Canonical JSON with every referenced file inlined.
std::string emit_spec(const SpecDocument& doc);

Shape shape_from_json(const nlohmann::json& j);

const SubsetSpec& subset_of(const SpecDocument& doc, const std::string& name);
const AmbientSpec& space_of(const SpecDocument& doc, const SubsetSpec& s);

FiniteSpace build_finite_space(const AmbientSpec& a);
Mask index_mask(Eigen::Index n, const std::vector<Eigen::Index>& indices);
GridRegion build_grid(const GridAmbient& a, const SubsetSpec& s);

}  // namespace metric_center
