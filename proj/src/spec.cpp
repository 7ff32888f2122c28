#include "metric_center/spec.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>

namespace metric_center {

using json = nlohmann::json;

bool operator==(const MatrixAmbient& a, const MatrixAmbient& b) {
    return a.h == b.h && a.dist.rows() == b.dist.rows() && a.dist.cols() == b.dist.cols() && a.dist == b.dist;
}

bool operator==(const GraphAmbient& a, const GraphAmbient& b) {
    if (a.vertices != b.vertices || a.h != b.h || a.allow_disconnected != b.allow_disconnected) return false;
    if (a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        const auto& x = a.edges[i];
        const auto& y = b.edges[i];
        if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
    }
    return true;
}

bool operator==(const PointAmbient& a, const PointAmbient& b) {
    return a.h == b.h && a.metric == b.metric && a.points.rows() == b.points.rows() &&
           a.points.cols() == b.points.cols() && a.points == b.points;
}

Engine engine_of(const AmbientSpec& a) {
    if (std::holds_alternative<LineAmbient>(a)) return Engine::line;
    if (std::holds_alternative<GridAmbient>(a)) return Engine::grid;
    return Engine::finite;
}

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::line: return "exact_line";
        case Engine::finite: return "finite_space";
        case Engine::grid: return "grid_region";
    }
    return "unknown";
}

namespace {

// Input iterator that counts consumed characters, so SAX callbacks know
// where in the text they are.
class CountingIterator {
public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIterator() = default;
    CountingIterator(const char* p, std::size_t* count) : p_(p), count_(count) {}
    reference operator*() const { return *p_; }
    CountingIterator& operator++() {
        ++p_;
        if (count_) ++*count_;
        return *this;
    }
    CountingIterator operator++(int) {
        CountingIterator old = *this;
        ++*this;
        return old;
    }
    friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }
    friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p_ != b.p_; }

private:
    const char* p_ = nullptr;
    std::size_t* count_ = nullptr;
};

std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

// Builds the DOM while recording the text offset of every JSON pointer and
// rejecting duplicate keys.
class LocatingBuilder {
public:
    explicit LocatingBuilder(const std::size_t* consumed) : consumed_(consumed) {}

    json root;
    std::map<std::string, std::size_t> offsets;
    std::optional<std::pair<std::string, std::size_t>> failure;  // message, offset

    bool null() { return put(nullptr); }
    bool boolean(bool v) { return put(v); }
    bool number_integer(json::number_integer_t v) { return put(v); }
    bool number_unsigned(json::number_unsigned_t v) { return put(v); }
    bool number_float(json::number_float_t v, const std::string&) { return put(v); }
    bool string(json::string_t& v) { return put(v); }
    bool binary(json::binary_t& v) { return put(json::binary(v)); }

    bool start_object(std::size_t) { return open(json::object()); }
    bool end_object() { return close(); }
    bool start_array(std::size_t) { return open(json::array()); }
    bool end_array() { return close(); }

    bool key(json::string_t& k) {
        if (stack_.back()->contains(k)) {
            failure = {"duplicate key \"" + k + "\"", *consumed_};
            return false;
        }
        frames_.back().key = k;
        offsets.emplace(path_to_next(), *consumed_);
        return true;
    }

    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
        failure = {ex.what(), position};
        return false;
    }

private:
    struct Frame {
        bool object;
        std::string key;
    };
    const std::size_t* consumed_;
    std::vector<json*> stack_;
    std::vector<Frame> frames_;

    std::string path_to_next() const {
        std::string p;
        for (std::size_t i = 0; i < frames_.size(); ++i) {
            if (frames_[i].object) {
                p += "/" + escape_pointer(frames_[i].key);
            } else {
                p += "/" + std::to_string(stack_[i]->size() - (i + 1 < frames_.size() ? 1 : 0));
            }
        }
        return p;
    }

    json* place(json v) {
        offsets.emplace(path_to_next(), *consumed_);
        if (stack_.empty()) {
            root = std::move(v);
            return &root;
        }
        json& top = *stack_.back();
        if (top.is_array()) {
            top.push_back(std::move(v));
            return &top.back();
        }
        top[frames_.back().key] = std::move(v);
        return &top[frames_.back().key];
    }

    template <typename T>
    bool put(T&& v) {
        place(json(std::forward<T>(v)));
        return true;
    }
    bool open(json v) {
        bool object = v.is_object();
        stack_.push_back(place(std::move(v)));
        frames_.push_back({object, {}});
        return true;
    }
    bool close() {
        stack_.pop_back();
        frames_.pop_back();
        return true;
    }
};

class Context {
public:
    Context(const std::string& text, std::map<std::string, std::size_t> offsets, std::string base)
        : text_(text), offsets_(std::move(offsets)), base_(std::move(base)) {}

    [[noreturn]] void fail(const std::string& msg, const std::string& pointer) const {
        std::size_t off = std::string::npos;
        // fall back to the nearest recorded ancestor
        for (std::string p = pointer;; p = p.substr(0, p.rfind('/'))) {
            auto it = offsets_.find(p);
            if (it != offsets_.end()) {
                off = it->second;
                break;
            }
            if (p.empty()) break;
        }
        auto [line, col] = off == std::string::npos ? std::pair<std::size_t, std::size_t>{0, 0} : line_col(text_, off);
        std::string where = line ? " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")" : "";
        throw SpecError(msg + " at " + (pointer.empty() ? "/" : pointer) + where, line, col, pointer);
    }

    static std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t off) {
        std::size_t line = 1, col = 1;
        off = std::min(off == 0 ? 0 : off - 1, text.size());
        for (std::size_t i = 0; i < off; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

    void allow(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) fail("expected an object", ptr);
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* k : keys) ok = ok || it.key() == k;
            if (!ok) fail("unknown key \"" + it.key() + "\"", ptr + "/" + escape_pointer(it.key()));
        }
    }

    const json& need(const json& obj, const std::string& ptr, const char* key) const {
        if (!obj.contains(key)) fail(std::string("missing key \"") + key + "\"", ptr);
        return obj.at(key);
    }

    double number(const json& v, const std::string& ptr) const {
        if (v.is_string()) {
            bool rational = true;
            try {
                (void)Rational::parse(v.get<std::string>());
            } catch (const std::exception&) {
                rational = false;
            }
            if (rational) fail("rational literal \"" + v.get<std::string>() + "\" in a float-regime space", ptr);
            fail("expected a number", ptr);
        }
        if (!v.is_number()) fail("expected a number", ptr);
        return v.get<double>();
    }

    double positive(const json& v, const std::string& ptr) const {
        double x = number(v, ptr);
        if (!(x > 0)) fail("expected a positive number", ptr);
        return x;
    }

    std::string str(const json& v, const std::string& ptr) const {
        if (!v.is_string()) fail("expected a string", ptr);
        return v.get<std::string>();
    }

    bool boolean(const json& v, const std::string& ptr) const {
        if (!v.is_boolean()) fail("expected true or false", ptr);
        return v.get<bool>();
    }

    Eigen::Index index(const json& v, const std::string& ptr) const {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail("expected a nonnegative integer", ptr);
        return static_cast<Eigen::Index>(v.get<std::int64_t>());
    }

    std::vector<double> vec(const json& v, const std::string& ptr) const {
        if (!v.is_array()) fail("expected an array of numbers", ptr);
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ptr + "/" + std::to_string(i)));
        return out;
    }

    Eigen::MatrixXd rows(const json& v, const std::string& ptr) const {
        if (!v.is_array() || v.empty()) fail("expected a nonempty array of rows", ptr);
        std::size_t cols = 0;
        std::vector<std::vector<double>> data;
        for (std::size_t i = 0; i < v.size(); ++i) {
            data.push_back(vec(v[i], ptr + "/" + std::to_string(i)));
            if (i == 0) cols = data.back().size();
            if (data.back().size() != cols || cols == 0) fail("rows must be nonempty and of equal length", ptr + "/" + std::to_string(i));
        }
        Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i][j];
        }
        return m;
    }

    std::ifstream open(const std::string& file, const std::string& ptr) const {
        std::filesystem::path p(file);
        if (p.is_relative()) p = std::filesystem::path(base_) / p;
        std::ifstream in(p);
        if (!in) fail("cannot open \"" + p.string() + "\"", ptr);
        return in;
    }

private:
    const std::string& text_;
    std::map<std::string, std::size_t> offsets_;
    std::string base_;
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

using Fail = std::function<void(const std::string&, const std::string&)>;

Shape parse_shape(const json& j, const std::string& ptr, const Context* ctx) {
    auto fail = [&](const std::string& msg, const std::string& p) -> void {
        if (ctx) ctx->fail(msg, p);
        throw std::invalid_argument(msg + " at " + p);
    };
    auto num = [&](const json& v, const std::string& p) -> double {
        if (ctx) return ctx->number(v, p);
        if (!v.is_number()) fail("expected a number", p);
        return v.get<double>();
    };
    auto vec = [&](const json& v, const std::string& p) {
        if (!v.is_array()) fail("expected an array of numbers", p);
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(num(v[i], p + "/" + std::to_string(i)));
        return to_vector(out);
    };
    auto closed = [&](const json& body, const std::string& p) {
        if (!body.contains("closed")) return true;
        if (!body["closed"].is_boolean()) fail("expected true or false", p + "/closed");
        return body["closed"].get<bool>();
    };
    auto keys = [&](const json& body, const std::string& p, std::initializer_list<const char*> allowed) {
        if (!body.is_object()) fail("expected an object", p);
        for (auto it = body.begin(); it != body.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed) ok = ok || it.key() == k;
            if (!ok) fail("unknown key \"" + it.key() + "\"", p + "/" + escape_pointer(it.key()));
        }
    };
    auto field = [&](const json& body, const std::string& p, const char* k) -> const json& {
        if (!body.contains(k)) fail(std::string("missing key \"") + k + "\"", p);
        return body.at(k);
    };

    if (!j.is_object() || j.size() != 1) fail("a shape is an object with exactly one key", ptr);
    const std::string kind = j.begin().key();
    const json& body = j.begin().value();
    const std::string p = ptr + "/" + escape_pointer(kind);
    try {
        if (kind == "ball") {
            keys(body, p, {"center", "radius", "closed"});
            return Shape::ball(vec(field(body, p, "center"), p + "/center"), num(field(body, p, "radius"), p + "/radius"),
                               closed(body, p));
        }
        if (kind == "box") {
            keys(body, p, {"lo", "hi", "closed"});
            return Shape::box(vec(field(body, p, "lo"), p + "/lo"), vec(field(body, p, "hi"), p + "/hi"), closed(body, p));
        }
        if (kind == "halfspace") {
            keys(body, p, {"normal", "offset", "closed"});
            return Shape::halfspace(vec(field(body, p, "normal"), p + "/normal"), num(field(body, p, "offset"), p + "/offset"),
                                    closed(body, p));
        }
        if (kind == "sphere") {
            keys(body, p, {"center", "radius"});
            return Shape::sphere(vec(field(body, p, "center"), p + "/center"), num(field(body, p, "radius"), p + "/radius"));
        }
        if (kind == "point") return Shape::point(vec(body, p));
        if (kind == "segment") {
            keys(body, p, {"a", "b"});
            return Shape::segment(vec(field(body, p, "a"), p + "/a"), vec(field(body, p, "b"), p + "/b"));
        }
        if (kind == "empty") {
            if (!body.is_number_integer() || body.get<int>() < 1) fail("expected a positive dimension", p);
            return Shape::empty(body.get<int>());
        }
        if (kind == "union" || kind == "intersection" || kind == "difference") {
            if (!body.is_array() || body.empty()) fail("expected a nonempty array of shapes", p);
            if (kind == "difference" && body.size() != 2) fail("difference takes exactly two shapes", p);
            Shape acc = parse_shape(body[0], p + "/0", ctx);
            for (std::size_t i = 1; i < body.size(); ++i) {
                Shape next = parse_shape(body[i], p + "/" + std::to_string(i), ctx);
                if (kind == "union") {
                    acc = acc | next;
                } else if (kind == "intersection") {
                    acc = acc & next;
                } else {
                    acc = acc - next;
                }
            }
            return acc;
        }
    } catch (const SpecError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        if (!ctx) throw;
        ctx->fail(e.what(), p);
    }
    fail("unknown shape \"" + kind + "\"", p);
    throw std::logic_error("unreachable");
}

AmbientSpec parse_space(const json& s, const std::string& ptr, const Context& ctx) {
    std::string type = ctx.str(ctx.need(s, ptr, "type"), ptr + "/type");
    if (type == "interval_set") {
        ctx.allow(s, ptr, {"type", "set"});
        LineAmbient a;
        if (s.contains("set")) {
            try {
                a.set = IntervalSet::parse(ctx.str(s["set"], ptr + "/set"));
            } catch (const SpecError&) {
                throw;
            } catch (const std::exception& e) {
                ctx.fail(std::string("bad interval set: ") + e.what(), ptr + "/set");
            }
        }
        return a;
    }
    if (type == "distance_matrix") {
        ctx.allow(s, ptr, {"type", "matrix", "csv", "h"});
        MatrixAmbient a;
        a.h = ctx.positive(ctx.need(s, ptr, "h"), ptr + "/h");
        if (s.contains("matrix") == s.contains("csv")) ctx.fail("give exactly one of \"matrix\" and \"csv\"", ptr);
        if (s.contains("matrix")) {
            a.dist = ctx.rows(s["matrix"], ptr + "/matrix");
        } else {
            auto in = ctx.open(ctx.str(s["csv"], ptr + "/csv"), ptr + "/csv");
            try {
                a.dist = read_csv_matrix(in);
            } catch (const std::exception& e) {
                ctx.fail(e.what(), ptr + "/csv");
            }
        }
        try {
            (void)FiniteSpace::from_matrix(a.dist, a.h);
        } catch (const std::exception& e) {
            ctx.fail(std::string("not a metric: ") + e.what(), ptr);
        }
        return a;
    }
    if (type == "graph") {
        ctx.allow(s, ptr, {"type", "edges", "edge_list", "vertices", "h", "allow_disconnected"});
        GraphAmbient a;
        if (s.contains("edges") == s.contains("edge_list")) ctx.fail("give exactly one of \"edges\" and \"edge_list\"", ptr);
        if (s.contains("edges")) {
            const json& e = s["edges"];
            if (!e.is_array()) ctx.fail("expected an array of [u, v, w]", ptr + "/edges");
            for (std::size_t i = 0; i < e.size(); ++i) {
                std::string p = ptr + "/edges/" + std::to_string(i);
                if (!e[i].is_array() || e[i].size() != 3) ctx.fail("expected [u, v, w]", p);
                WeightedEdge w{ctx.index(e[i][0], p + "/0"), ctx.index(e[i][1], p + "/1"), ctx.positive(e[i][2], p + "/2")};
                a.edges.push_back(w);
                a.vertices = std::max({a.vertices, w.u + 1, w.v + 1});
            }
        } else {
            auto in = ctx.open(ctx.str(s["edge_list"], ptr + "/edge_list"), ptr + "/edge_list");
            try {
                std::tie(a.vertices, a.edges) = read_edge_list(in);
            } catch (const std::exception& e) {
                ctx.fail(e.what(), ptr + "/edge_list");
            }
        }
        if (s.contains("vertices")) {
            Eigen::Index n = ctx.index(s["vertices"], ptr + "/vertices");
            if (n < a.vertices) ctx.fail("an edge names a vertex beyond \"vertices\"", ptr + "/vertices");
            a.vertices = n;
        }
        if (s.contains("h")) a.h = ctx.positive(s["h"], ptr + "/h");
        if (s.contains("allow_disconnected")) a.allow_disconnected = ctx.boolean(s["allow_disconnected"], ptr + "/allow_disconnected");
        try {
            (void)build_finite_space(a);
        } catch (const std::exception& e) {
            ctx.fail(e.what(), ptr);
        }
        return a;
    }
    if (type == "point_cloud") {
        ctx.allow(s, ptr, {"type", "points", "csv", "metric", "h"});
        PointAmbient a;
        a.h = ctx.positive(ctx.need(s, ptr, "h"), ptr + "/h");
        if (s.contains("points") == s.contains("csv")) ctx.fail("give exactly one of \"points\" and \"csv\"", ptr);
        if (s.contains("points")) {
            a.points = ctx.rows(s["points"], ptr + "/points");
        } else {
            auto in = ctx.open(ctx.str(s["csv"], ptr + "/csv"), ptr + "/csv");
            try {
                a.points = read_csv_matrix(in);
            } catch (const std::exception& e) {
                ctx.fail(e.what(), ptr + "/csv");
            }
        }
        if (s.contains("metric")) {
            std::string m = ctx.str(s["metric"], ptr + "/metric");
            if (m == "euclidean") {
                a.metric = PointMetric::euclidean;
            } else if (m == "max") {
                a.metric = PointMetric::max;
            } else {
                ctx.fail("metric must be \"euclidean\" or \"max\"", ptr + "/metric");
            }
        }
        return a;
    }
    if (type == "grid_csg") {
        ctx.allow(s, ptr, {"type", "lo", "hi", "h"});
        GridAmbient a;
        a.lo = ctx.vec(ctx.need(s, ptr, "lo"), ptr + "/lo");
        a.hi = ctx.vec(ctx.need(s, ptr, "hi"), ptr + "/hi");
        a.h = ctx.positive(ctx.need(s, ptr, "h"), ptr + "/h");
        if (a.lo.empty() || a.lo.size() != a.hi.size() || a.lo.size() > 3) ctx.fail("lo and hi need the same dimension, 1 to 3", ptr);
        for (std::size_t i = 0; i < a.lo.size(); ++i) {
            if (!(a.lo[i] < a.hi[i])) ctx.fail("lo must be below hi", ptr + "/lo/" + std::to_string(i));
        }
        return a;
    }
    ctx.fail("unknown space type \"" + type + "\"", ptr + "/type");
}

Eigen::Index finite_size(const AmbientSpec& a) {
    if (auto* m = std::get_if<MatrixAmbient>(&a)) return m->dist.rows();
    if (auto* g = std::get_if<GraphAmbient>(&a)) return g->vertices;
    if (auto* p = std::get_if<PointAmbient>(&a)) return p->points.rows();
    return 0;
}

std::vector<Eigen::Index> parse_indices(const json& v, const std::string& ptr, Eigen::Index n, const Context& ctx) {
    if (!v.is_array()) ctx.fail("expected an array of point indices", ptr);
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Eigen::Index k = ctx.index(v[i], ptr + "/" + std::to_string(i));
        if (k >= n) ctx.fail("index " + std::to_string(k) + " outside a space of " + std::to_string(n) + " points", ptr + "/" + std::to_string(i));
        out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SubsetSpec parse_subset(const json& s, const std::string& ptr, const SpecDocument& doc, const Context& ctx) {
    if (!s.is_object()) ctx.fail("expected an object", ptr);
    SubsetSpec out;
    out.space = ctx.str(ctx.need(s, ptr, "space"), ptr + "/space");
    auto it = doc.spaces.find(out.space);
    if (it == doc.spaces.end()) ctx.fail("subset refers to undeclared space \"" + out.space + "\"", ptr + "/space");
    switch (engine_of(it->second)) {
        case Engine::line: {
            ctx.allow(s, ptr, {"space", "set"});
            try {
                out.set = IntervalSet::parse(ctx.str(ctx.need(s, ptr, "set"), ptr + "/set"));
            } catch (const SpecError&) {
                throw;
            } catch (const std::exception& e) {
                ctx.fail(std::string("bad interval set: ") + e.what(), ptr + "/set");
            }
            if (!out.set.is_subset_of(std::get<LineAmbient>(it->second).set)) {
                ctx.fail("subset is not contained in its space", ptr + "/set");
            }
            break;
        }
        case Engine::finite: {
            ctx.allow(s, ptr, {"space", "indices", "mask", "view"});
            Eigen::Index n = finite_size(it->second);
            if (s.contains("indices") == s.contains("mask")) ctx.fail("give exactly one of \"indices\" and \"mask\"", ptr);
            if (s.contains("indices")) {
                out.indices = parse_indices(s["indices"], ptr + "/indices", n, ctx);
            } else {
                const json& m = s["mask"];
                if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != n) {
                    ctx.fail("mask needs one 0/1 entry per point (" + std::to_string(n) + ")", ptr + "/mask");
                }
                for (std::size_t i = 0; i < m.size(); ++i) {
                    std::string p = ptr + "/mask/" + std::to_string(i);
                    if (!m[i].is_number_integer() || (m[i] != 0 && m[i] != 1)) ctx.fail("expected 0 or 1", p);
                    if (m[i] == 1) out.indices.push_back(static_cast<Eigen::Index>(i));
                }
            }
            if (s.contains("view")) {
                out.view = parse_indices(s["view"], ptr + "/view", n, ctx);
                if (!std::includes(out.view.begin(), out.view.end(), out.indices.begin(), out.indices.end())) {
                    ctx.fail("subset is not contained in its view", ptr + "/view");
                }
            }
            break;
        }
        case Engine::grid: {
            ctx.allow(s, ptr, {"space", "shape"});
            const auto& g = std::get<GridAmbient>(it->second);
            Shape sh = parse_shape(ctx.need(s, ptr, "shape"), ptr + "/shape", &ctx);
            if (sh.dim() != static_cast<int>(g.lo.size())) {
                ctx.fail("shape dimension " + std::to_string(sh.dim()) + " differs from the space's " + std::to_string(g.lo.size()),
                         ptr + "/shape");
            }
            out.shape = s["shape"];
            break;
        }
    }
    return out;
}

TaskSpec parse_task(const json& t, const std::string& ptr, const SpecDocument& doc, const Context& ctx) {
    ctx.allow(t, ptr, {"command", "subsets", "h"});
    TaskSpec out;
    out.command = ctx.str(ctx.need(t, ptr, "command"), ptr + "/command");
    static const std::set<std::string> commands{"analyze", "product", "union", "inscribe", "filtrate"};
    if (!commands.count(out.command)) ctx.fail("unknown command \"" + out.command + "\"", ptr + "/command");
    const json& s = ctx.need(t, ptr, "subsets");
    if (!s.is_array() || s.empty()) ctx.fail("expected a nonempty array of subset names", ptr + "/subsets");
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::string p = ptr + "/subsets/" + std::to_string(i);
        std::string name = ctx.str(s[i], p);
        if (!doc.subsets.count(name)) ctx.fail("task refers to undeclared subset \"" + name + "\"", p);
        out.subsets.push_back(name);
    }
    bool many = out.command == "product" || out.command == "union";
    if (!many && out.subsets.size() != 1) ctx.fail(out.command + " takes exactly one subset", ptr + "/subsets");
    if (out.command == "product" && out.subsets.size() < 2) ctx.fail("product takes at least two subsets", ptr + "/subsets");
    if (t.contains("h")) out.h = ctx.positive(t["h"], ptr + "/h");
    return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

SpecDocument parse_spec(const std::string& text, const std::string& base_dir) {
    std::size_t consumed = 0;
    LocatingBuilder builder(&consumed);
    CountingIterator first(text.data(), &consumed), last(text.data() + text.size(), nullptr);
    bool ok = json::sax_parse(first, last, &builder);
    if (!ok || builder.failure) {
        std::string msg = builder.failure ? builder.failure->first : "malformed JSON";
        std::size_t off = builder.failure ? builder.failure->second : consumed;
        auto [line, col] = Context::line_col(text, off);
        throw SpecError("syntax error: " + msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")",
                        line, col, "");
    }
    const json& root = builder.root;
    Context ctx(text, builder.offsets, base_dir);
    ctx.allow(root, "", {"spaces", "subsets", "tasks"});

    SpecDocument doc;
    const json& spaces = ctx.need(root, "", "spaces");
    if (!spaces.is_object()) ctx.fail("expected an object", "/spaces");
    for (auto it = spaces.begin(); it != spaces.end(); ++it) {
        std::string ptr = "/spaces/" + escape_pointer(it.key());
        if (!it.value().is_object()) ctx.fail("expected an object", ptr);
        doc.spaces.emplace(it.key(), parse_space(it.value(), ptr, ctx));
    }
    if (root.contains("subsets")) {
        const json& subsets = root["subsets"];
        if (!subsets.is_object()) ctx.fail("expected an object", "/subsets");
        for (auto it = subsets.begin(); it != subsets.end(); ++it) {
            std::string ptr = "/subsets/" + escape_pointer(it.key());
            if (doc.spaces.count(it.key())) ctx.fail("name \"" + it.key() + "\" is already used by a space", ptr);
            doc.subsets.emplace(it.key(), parse_subset(it.value(), ptr, doc, ctx));
        }
    }
    if (root.contains("tasks")) {
        const json& tasks = root["tasks"];
        if (!tasks.is_array()) ctx.fail("expected an array", "/tasks");
        for (std::size_t i = 0; i < tasks.size(); ++i) doc.tasks.push_back(parse_task(tasks[i], "/tasks/" + std::to_string(i), doc, ctx));
    }
    return doc;
}

std::string emit_spec(const SpecDocument& doc) {
    json root;
    root["spaces"] = json::object();
    for (const auto& [name, a] : doc.spaces) {
        json s;
        if (auto* l = std::get_if<LineAmbient>(&a)) {
            s = {{"type", "interval_set"}, {"set", l->set.str()}};
        } else if (auto* m = std::get_if<MatrixAmbient>(&a)) {
            s = {{"type", "distance_matrix"}, {"matrix", matrix_json(m->dist)}, {"h", m->h}};
        } else if (auto* g = std::get_if<GraphAmbient>(&a)) {
            json edges = json::array();
            for (const auto& e : g->edges) edges.push_back({e.u, e.v, e.w});
            s = {{"type", "graph"}, {"vertices", g->vertices}, {"edges", edges}, {"allow_disconnected", g->allow_disconnected}};
            if (g->h) s["h"] = *g->h;
        } else if (auto* p = std::get_if<PointAmbient>(&a)) {
            s = {{"type", "point_cloud"}, {"points", matrix_json(p->points)},
                 {"metric", p->metric == PointMetric::max ? "max" : "euclidean"}, {"h", p->h}};
        } else {
            const auto& q = std::get<GridAmbient>(a);
            s = {{"type", "grid_csg"}, {"lo", q.lo}, {"hi", q.hi}, {"h", q.h}};
        }
        root["spaces"][name] = s;
    }
    root["subsets"] = json::object();
    for (const auto& [name, s] : doc.subsets) {
        json j = {{"space", s.space}};
        switch (engine_of(doc.spaces.at(s.space))) {
            case Engine::line: j["set"] = s.set.str(); break;
            case Engine::finite:
                j["indices"] = s.indices;
                if (!s.view.empty()) j["view"] = s.view;
                break;
            case Engine::grid: j["shape"] = s.shape; break;
        }
        root["subsets"][name] = j;
    }
    if (!doc.tasks.empty()) {
        root["tasks"] = json::array();
        for (const auto& t : doc.tasks) {
            json j = {{"command", t.command}, {"subsets", t.subsets}};
            if (t.h) j["h"] = *t.h;
            root["tasks"].push_back(j);
        }
    }
    return root.dump(2) + "\n";
}

Shape shape_from_json(const json& j) { return parse_shape(j, "", nullptr); }

const SubsetSpec& subset_of(const SpecDocument& doc, const std::string& name) {
    auto it = doc.subsets.find(name);
    if (it == doc.subsets.end()) throw std::invalid_argument("no subset named \"" + name + "\"");
    return it->second;
}

const AmbientSpec& space_of(const SpecDocument& doc, const SubsetSpec& s) { return doc.spaces.at(s.space); }

FiniteSpace build_finite_space(const AmbientSpec& a) {
    if (auto* m = std::get_if<MatrixAmbient>(&a)) return FiniteSpace::from_trusted_matrix(m->dist, m->h);
    if (auto* g = std::get_if<GraphAmbient>(&a)) return shortest_path_metric(g->vertices, g->edges, g->allow_disconnected, g->h);
    if (auto* p = std::get_if<PointAmbient>(&a)) return FiniteSpace::from_points(p->points, p->metric, p->h);
    throw std::invalid_argument("space is not a finite metric space");
}

Mask index_mask(Eigen::Index n, const std::vector<Eigen::Index>& indices) {
    Mask m(static_cast<std::size_t>(n), false);
    for (auto i : indices) m.at(static_cast<std::size_t>(i)) = true;
    return m;
}

GridRegion build_grid(const GridAmbient& a, const SubsetSpec& s) {
    return GridRegion::rasterize(shape_from_json(s.shape), to_vector(a.lo), to_vector(a.hi), a.h);
}

}  // namespace metric_center
