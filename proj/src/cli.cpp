#include "metric_center/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "metric_center/filtration.hpp"
#include "metric_center/product_ops.hpp"
#include "metric_center/spec.hpp"
#include "metric_center/union_ops.hpp"
#include "metric_center/verify.hpp"

namespace metric_center {

namespace {

/// Input or usage problem; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string spec;
    std::vector<std::string> subsets;
    std::optional<double> h;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t cases = 100;
    std::string out;
    std::string format = "text";
    std::string suite;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string num(double v) { return std::isinf(v) ? (v > 0 ? "inf" : "-inf") : format_double(v); }
std::string yes(bool b) { return b ? "true" : "false"; }

// Text summary lines and CSV comment lines share one shape.
class Summary {
public:
    void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void write(std::ostream& os, bool csv) const {
        for (const auto& [k, v] : rows_) {
            if (csv) {
                os << "# " << k << ',' << csv_field(v) << '\n';
            } else {
                os << k << ": " << v << '\n';
            }
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

AmbientSpec with_h(AmbientSpec a, std::optional<double> h) {
    if (!h) return a;
    if (*h <= 0) throw UsageError("--h must be positive");
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (!std::is_same_v<T, LineAmbient>) s.h = *h;
        },
        a);
    return a;
}

SpecDocument load_spec(const std::string& path) {
    if (path.empty()) throw UsageError("--spec is required");
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read spec file \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    auto base = std::filesystem::path(path).parent_path();
    return parse_spec(buf.str(), base.empty() ? "." : base.string());
}

std::string index_list(const Mask& m, const std::vector<Eigen::Index>* map = nullptr, std::size_t limit = 20) {
    std::ostringstream os;
    os << '{';
    std::size_t shown = 0, total = mask_count(m);
    for (std::size_t i = 0; i < m.size() && shown < limit; ++i) {
        if (!m[i]) continue;
        os << (shown ? "," : "") << (map ? (*map)[i] : static_cast<Eigen::Index>(i));
        ++shown;
    }
    if (total > shown) os << ",… (" << total << " total)";
    os << '}';
    return os.str();
}

struct FiniteInput {
    FiniteSpace X;
    Mask A;
    Mask view;
};

FiniteInput finite_input(const SpecDocument& doc, const SubsetSpec& s, std::optional<double> h) {
    FiniteSpace X = build_finite_space(with_h(space_of(doc, s), h));
    Mask A = index_mask(X.size(), s.indices);
    Mask view = s.view.empty() ? Mask(static_cast<std::size_t>(X.size()), true) : index_mask(X.size(), s.view);
    return {std::move(X), std::move(A), std::move(view)};
}

GridRegion grid_input(const SpecDocument& doc, const SubsetSpec& s, std::optional<double> h) {
    auto g = std::get<GridAmbient>(with_h(space_of(doc, s), h));
    try {
        return build_grid(g, s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Eigen::VectorXd centroid(const GridRegion& G, const Mask& m) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(G.dim());
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < G.size(); ++i) {
        if (!m[static_cast<std::size_t>(i)]) continue;
        c += G.center(i);
        ++n;
    }
    return n ? Eigen::VectorXd(c / static_cast<double>(n)) : c;
}

std::string vec_str(const Eigen::VectorXd& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s + ")";
}

// ------------------------------------------------------------------ analyze

void analyze_line(const std::string& name, const IntervalSet& A, const IntervalSet& Y, bool csv, std::ostream& os) {
    auto d = descriptors_line(A, Y);
    if (csv) {
        os << "subset,engine,clopen,boundary,center,radius,semi_radius,quasi_center,quasi_radius,semi_quasi_radius,diameter\n";
        os << csv_field(name) << ",exact_line," << yes(d.clopen) << ',' << csv_field(d.boundary.str()) << ','
           << csv_field(d.center.str()) << ',' << d.radius.str() << ',' << d.semi_radius.str() << ','
           << csv_field(d.quasi_center.str()) << ',' << d.quasi_radius.str() << ',' << d.semi_quasi_radius.str() << ','
           << d.diameter.str() << '\n';
    }
    Summary s;
    s.add("engine", "exact_line");
    s.add("tolerance", "exact");
    s.add("subset", name + " = " + A.str());
    s.add("ambient", Y.str());
    if (!csv) {
        s.add("boundary", d.boundary.str());
        s.add("clopen", yes(d.clopen));
        s.add("center", d.center.str());
        s.add("radius", d.radius.str());
        s.add("semi_radius", d.semi_radius.str());
        s.add("quasi_center", d.quasi_center.str());
        s.add("quasi_radius", d.quasi_radius.str());
        s.add("semi_quasi_radius", d.semi_quasi_radius.str());
        s.add("diameter", d.diameter.str());
    }
    for (const auto& n : d.notes) s.add("note", n);
    s.write(os, csv);
}

void analyze_finite(const std::string& name, const FiniteInput& in, bool csv, std::ostream& os) {
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < in.view.size(); ++i) {
        if (in.view[i]) keep.push_back(static_cast<Eigen::Index>(i));
    }
    FiniteSpace X = keep.size() == in.view.size() ? in.X : subspace(in.X, keep);
    Mask A(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) A[i] = in.A[static_cast<std::size_t>(keep[i])];
    auto d = descriptors_bf(X, A);
    auto top = eps_topology(X, A);
    if (csv) {
        os << "point,in_subset,in_boundary,in_center,in_qcenter\n";
        for (std::size_t i = 0; i < keep.size(); ++i) {
            os << keep[i] << ',' << int(A[i]) << ',' << int(top.boundary[i]) << ',' << int(d.center[i]) << ','
               << int(d.quasi_center[i]) << '\n';
        }
    }
    Summary s;
    s.add("engine", "finite_space");
    s.add("h", num(X.h()));
    s.add("tolerance", "boundary and center band h = " + num(X.h()));
    s.add("subset", name + " (" + std::to_string(mask_count(A)) + " of " + std::to_string(X.size()) + " points)");
    s.add("clopen", yes(d.clopen));
    s.add("boundary_points", std::to_string(mask_count(d.boundary)));
    s.add("center", index_list(d.center, &keep));
    s.add("radius", d.radius.str());
    s.add("semi_radius", d.semi_radius.str());
    s.add("quasi_center", index_list(d.quasi_center, &keep));
    s.add("quasi_radius", d.quasi_radius.str());
    s.add("semi_quasi_radius", d.semi_quasi_radius.str());
    s.add("diameter", d.diameter.str());
    for (const auto& n : d.notes) s.add("note", n);
    s.write(os, csv);
}

void analyze_grid(const std::string& name, const GridRegion& G, bool csv, std::ostream& os) {
    auto d = descriptors_grid(G);
    if (csv) {
        write_grid_csv(os, G, d);
        return;
    }
    Summary s;
    s.add("engine", "grid_region");
    s.add("h", num(G.h()));
    s.add("tolerance", "center band 2h = " + num(2 * G.h()));
    s.add("subset", name + " (" + std::to_string(mask_count(G.occupancy())) + " cells)");
    s.add("clopen", yes(d.clopen));
    s.add("thin", yes(d.thin));
    s.add("center_cells", std::to_string(mask_count(d.center)));
    if (!set_empty(d.center)) s.add("center_centroid", vec_str(centroid(G, d.center)));
    s.add("radius", d.radius.str());
    s.add("semi_radius", d.semi_radius.str());
    s.add("quasi_center_cells", std::to_string(mask_count(d.quasi_center)));
    s.add("quasi_radius", d.quasi_radius.str());
    s.add("diameter", d.diameter.str());
    for (const auto& n : d.notes) s.add("note", n);
    s.write(os, false);
}

int cmd_analyze(const SpecDocument& doc, const std::vector<std::string>& names, const Options& o, std::ostream& os) {
    if (names.size() != 1) throw UsageError("analyze takes exactly one subset");
    const auto& s = subset_of(doc, names[0]);
    bool csv = o.format == "csv";
    switch (engine_of(space_of(doc, s))) {
        case Engine::line: analyze_line(names[0], s.set, std::get<LineAmbient>(space_of(doc, s)).set, csv, os); break;
        case Engine::finite: analyze_finite(names[0], finite_input(doc, s, o.h), csv, os); break;
        case Engine::grid: analyze_grid(names[0], grid_input(doc, s, o.h), csv, os); break;
    }
    return 0;
}

// ------------------------------------------------------------------ product

Factor factor_of(const SpecDocument& doc, const SubsetSpec& s) {
    switch (engine_of(space_of(doc, s))) {
        case Engine::line: return Factor::line(s.set, std::get<LineAmbient>(space_of(doc, s)).set);
        case Engine::finite: {
            auto in = finite_input(doc, s, std::nullopt);
            if (!s.view.empty()) throw UsageError("product factors cannot carry a view");
            return Factor::finite(in.X, in.A);
        }
        case Engine::grid: {
            if (!s.shape.contains("ball")) throw UsageError("a grid factor must be a single ball shape");
            const auto& b = s.shape["ball"];
            auto c = b.at("center").get<std::vector<double>>();
            return Factor::ball(Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())),
                                b.at("radius").get<double>());
        }
    }
    throw UsageError("unsupported factor");
}

int cmd_product(const SpecDocument& doc, const std::vector<std::string>& names, const Options& o, std::ostream& os) {
    if (names.size() < 2) throw UsageError("product takes at least two subsets");
    bool csv = o.format == "csv";
    bool all_line = true;
    for (const auto& n : names) all_line = all_line && engine_of(space_of(doc, subset_of(doc, n))) == Engine::line;
    Summary s;
    if (all_line) {
        std::vector<std::pair<IntervalSet, IntervalSet>> f;
        for (const auto& n : names) {
            const auto& sub = subset_of(doc, n);
            f.emplace_back(sub.set, std::get<LineAmbient>(space_of(doc, sub)).set);
        }
        auto p = product_center_n(f);
        if (csv) {
            os << "factor,subset,center_factor\n";
            for (std::size_t i = 0; i < names.size(); ++i) {
                os << i << ',' << csv_field(names[i]) << ',' << csv_field(p.center_empty ? "{}" : p.factors[i].str()) << '\n';
            }
        }
        s.add("engine", "exact_line");
        s.add("tolerance", "exact");
        s.add("case", case_tag(p.tag));
        s.add("center", p.center_empty ? "{}" : p.describe());
        s.add("radius", p.radius.str());
        s.add("threshold", p.threshold.str());
        for (const auto& n : p.notes) s.add("note", n);
    } else {
        std::vector<Factor> f;
        for (const auto& n : names) f.push_back(factor_of(doc, subset_of(doc, n)));
        auto p = product_center_mixed(f);
        if (csv) {
            os << "factor,subset,center_factor\n";
            for (std::size_t i = 0; i < names.size(); ++i) {
                os << i << ',' << csv_field(names[i]) << ',' << csv_field(p.hats[i]) << '\n';
            }
        }
        s.add("engine", "mixed");
        s.add("case", case_tag(p.tag));
        s.add("center", p.center_empty ? "{}" : [&] {
            std::string c;
            for (std::size_t i = 0; i < p.hats.size(); ++i) c += (i ? " × " : "") + p.hats[i];
            return c;
        }());
        s.add("radius", p.radius.str());
        s.add("threshold", p.threshold.str());
    }
    if (o.h) {
        std::vector<Factor> f;
        for (const auto& n : names) f.push_back(factor_of(doc, subset_of(doc, n)));
        try {
            auto cmp = product_oracle(f, *o.h);
            s.add("oracle_h", num(*o.h));
            s.add("oracle_cells", std::to_string(cmp.cells));
            s.add("oracle_radius", cmp.report.radius.str());
            if (cmp.compared) {
                s.add("oracle_radius_deviation", num(cmp.radius_deviation));
                s.add("oracle_center_hausdorff", num(cmp.hausdorff));
                s.add("oracle_tolerance", "4h = " + num(4 * *o.h));
            } else {
                s.add("oracle_compared", "false (closed form has an empty center)");
            }
        } catch (const std::length_error& e) {
            throw UsageError(std::string(e.what()) + " (raise METRIC_CENTER_CELL_CAP or increase --h)");
        }
    }
    s.write(os, csv);
    return 0;
}

// ------------------------------------------------------------------ union

template <typename Set, typename S, typename Show>
void union_summary(const UnionReport<Set, S>& u, const std::vector<std::string>& names, Summary& s, Show show, bool csv,
                   std::ostream& os) {
    if (csv) {
        os << "part,subset,radius,center,tilde,in_m\n";
        for (std::size_t i = 0; i < names.size(); ++i) {
            os << i << ',' << csv_field(names[i]) << ',' << u.parts[i].radius.str() << ',' << csv_field(show(u.parts[i].center))
               << ',' << csv_field(show(u.tilde[i])) << ',' << yes(u.in_m[i]) << '\n';
        }
    } else {
        for (std::size_t i = 0; i < names.size(); ++i) {
            s.add("part " + names[i], "rad " + u.parts[i].radius.str() + ", center " + show(u.parts[i].center) + ", tilde " +
                                          show(u.tilde[i]) + (u.in_m[i] ? ", in M" : ""));
        }
    }
    s.add("case", case_tag(u.tag));
    if (u.dominant) s.add("dominant", names[*u.dominant]);
    if (u.double_tilde) s.add("double_tilde", show(*u.double_tilde));
    s.add("center_determined", yes(u.center_determined));
    if (u.center_determined) {
        s.add("center", show(u.center));
        s.add("radius", u.radius.str());
    }
    s.add("semi_radius_bound", u.srad.str());
    s.add("direct_center", show(u.direct.center));
    s.add("direct_radius", u.direct.radius.str());
    s.add("direct_semi_radius", u.direct.semi_radius.str());
    for (const auto& w : u.warnings) s.add("warning", w);
}

int cmd_union(const SpecDocument& doc, const std::vector<std::string>& names, const Options& o, std::ostream& os) {
    if (names.size() < 2) throw UsageError("union takes at least two subsets");
    const std::string& space = subset_of(doc, names[0]).space;
    for (const auto& n : names) {
        if (subset_of(doc, n).space != space) throw UsageError("union parts must share one space");
    }
    bool csv = o.format == "csv";
    Summary s;
    int status = 0;
    try {
        switch (engine_of(doc.spaces.at(space))) {
            case Engine::line: {
                const IntervalSet& Y = std::get<LineAmbient>(doc.spaces.at(space)).set;
                std::vector<IntervalSet> parts;
                for (const auto& n : names) parts.push_back(subset_of(doc, n).set);
                auto u = parts.size() == 2 ? union_descriptors(parts[0], parts[1], Y) : union_descriptors_n(parts, Y);
                s.add("engine", "exact_line");
                s.add("tolerance", "exact");
                union_summary(u, names, s, [](const IntervalSet& x) { return x.str(); }, csv, os);
                if (u.center_determined) {
                    bool agree = u.center == u.direct.center && u.radius == u.direct.radius;
                    s.add("direct_agrees", yes(agree));
                    if (!agree) status = 1;
                }
                if (!u.srad.contains(u.direct.semi_radius)) status = 1;
                break;
            }
            case Engine::finite: {
                std::vector<SampledPart> parts;
                std::optional<FiniteSpace> X;
                for (const auto& n : names) {
                    auto in = finite_input(doc, subset_of(doc, n), o.h);
                    parts.push_back({in.A, in.view});
                    if (!X) X = in.X;
                }
                auto u = union_descriptors(*X, parts);
                s.add("engine", "finite_space");
                s.add("h", num(X->h()));
                s.add("tolerance", "tilde and radius ties within h = " + num(X->h()));
                union_summary(u, names, s, [](const Mask& m) { return index_list(m); }, csv, os);
                if (u.center_determined && u.radius.is_finite() && u.direct.radius.is_finite()) {
                    s.add("radius_deviation", num(std::abs(u.radius.value() - u.direct.radius.value())));
                }
                break;
            }
            case Engine::grid: {
                std::vector<Mask> parts;
                std::optional<GridRegion> G;
                for (const auto& n : names) {
                    GridRegion g = grid_input(doc, subset_of(doc, n), o.h);
                    parts.push_back(g.occupancy());
                    if (!G) G = g;
                }
                auto u = union_descriptors(*G, parts);
                s.add("engine", "grid_region");
                s.add("h", num(G->h()));
                s.add("tolerance", "tilde and radius ties within 2h = " + num(2 * G->h()));
                auto show = [&](const Mask& m) {
                    return std::to_string(mask_count(m)) + " cells" + (set_empty(m) ? "" : " near " + vec_str(centroid(*G, m)));
                };
                union_summary(u, names, s, show, csv, os);
                if (u.center_determined && u.radius.is_finite() && u.direct.radius.is_finite()) {
                    s.add("radius_deviation", num(std::abs(u.radius.value() - u.direct.radius.value())));
                }
                break;
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    s.write(os, csv);
    return status;
}

// ------------------------------------------------------------------ inscribe

int cmd_inscribe(const SpecDocument& doc, const std::vector<std::string>& names, const Options& o, std::ostream& os) {
    if (names.size() != 1) throw UsageError("inscribe takes exactly one subset");
    const auto& sub = subset_of(doc, names[0]);
    bool csv = o.format == "csv";
    Summary s;
    int status = 0;
    switch (engine_of(space_of(doc, sub))) {
        case Engine::line: {
            auto d = descriptors_line(sub.set, std::get<LineAmbient>(space_of(doc, sub)).set);
            s.add("engine", "exact_line");
            s.add("centers", d.quasi_center.str());
            s.add("radius", d.quasi_radius.str());
            break;
        }
        case Engine::finite: {
            auto in = finite_input(doc, sub, o.h);
            auto d = descriptors_bf(in.X, in.A);
            s.add("engine", "finite_space");
            s.add("h", num(in.X.h()));
            s.add("centers", index_list(d.quasi_center));
            s.add("radius", d.quasi_radius.str());
            break;
        }
        case Engine::grid: {
            GridRegion G = grid_input(doc, sub, o.h);
            auto b = largest_inscribed_balls(G);
            if (csv) {
                os << "cell";
                for (int a = 0; a < G.dim(); ++a) os << ",x" << a;
                os << '\n';
                for (Eigen::Index i = 0; i < G.size(); ++i) {
                    if (!b.centers[static_cast<std::size_t>(i)]) continue;
                    os << i;
                    Eigen::VectorXd c = G.center(i);
                    for (int a = 0; a < G.dim(); ++a) os << ',' << num(c[a]);
                    os << '\n';
                }
            }
            s.add("engine", "grid_region");
            s.add("h", num(G.h()));
            s.add("tolerance", "centers within h/2 of the quasi-radius; certificate slack h");
            s.add("exists", yes(b.exists));
            s.add("radius", b.radius.str());
            s.add("center_cells", std::to_string(mask_count(b.centers)));
            if (b.exists) s.add("center_centroid", vec_str(centroid(G, b.centers)));
            s.add("certificate_inside", b.certificate_inside ? "ok" : "failed");
            s.add("certificate_maximal", b.certificate_maximal ? "ok" : "failed");
            bool ok = b.certificate_inside && b.certificate_maximal;
            s.add("certificate", ok ? "ok" : "failed");
            if (b.exists && !ok) status = 1;
            s.add("verdict", b.verdict);
            break;
        }
    }
    s.write(os, csv);
    return status;
}

// ------------------------------------------------------------------ filtrate

template <typename S>
void filtration_out(const ConjectureReport<S>& r, Summary& s, bool csv, std::ostream& os) {
    auto show = [](const S& v) {
        if constexpr (std::is_same_v<S, double>) {
            return num(v);
        } else {
            return v.str();
        }
    };
    if (csv) os << "alpha,betti0,betti1,measure\n";
    for (const auto& row : r.rows) {
        std::string b1 = row.betti1 ? std::to_string(*row.betti1) : "";
        if (csv) {
            os << show(row.alpha) << ',' << row.betti0 << ',' << b1 << ',' << row.measure.str() << '\n';
        } else {
            s.add("alpha " + show(row.alpha),
                  "beta0 " + std::to_string(row.betti0) + (b1.empty() ? "" : ", beta1 " + b1) + ", measure " + row.measure.str());
        }
    }
    s.add("dimension", std::to_string(r.dimension));
    s.add("radius", r.radius.str());
    s.add("betti_subset", std::to_string(r.betti_subset));
    s.add("betti_center", std::to_string(r.betti_center));
    s.add("target", std::to_string(r.target));
    s.add("verdict", r.verdict());
    s.add("alpha_star", r.alpha_star ? show(*r.alpha_star) : "none");
    s.add("center_excluded", yes(r.center_excluded) + " (" + std::to_string(r.exclusion_checked) + " values checked)");
    s.add("nested", yes(r.nested));
    for (const auto& n : r.notes) s.add("note", n);
}

int cmd_filtrate(const SpecDocument& doc, const std::vector<std::string>& names, const Options& o, std::ostream& os) {
    if (names.size() != 1) throw UsageError("filtrate takes exactly one subset");
    const auto& sub = subset_of(doc, names[0]);
    bool csv = o.format == "csv";
    Summary s;
    try {
        switch (engine_of(space_of(doc, sub))) {
            case Engine::line: {
                s.add("engine", "exact_line");
                s.add("tolerance", "exact");
                auto r = conjecture_scan(sub.set, std::get<LineAmbient>(space_of(doc, sub)).set);
                filtration_out(r, s, csv, os);
                break;
            }
            case Engine::grid: {
                GridRegion G = grid_input(doc, sub, o.h);
                s.add("engine", "grid_region");
                s.add("h", num(G.h()));
                s.add("tolerance", "center exclusion checked for alpha < rad - 2h");
                auto r = conjecture_scan(G);
                filtration_out(r, s, csv, os);
                break;
            }
            case Engine::finite: throw UsageError("filtrate supports line and grid subsets only");
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    s.write(os, csv);
    return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Options& o, std::ostream& os) {
    if (o.suite.empty()) throw UsageError("--suite is required");
    if (!o.seed_given) throw UsageError("--seed is required for verify");
    auto suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), o.suite) == suites.end()) throw UsageError("unknown suite \"" + o.suite + "\"");
    auto r = run_verify(o.suite, o.cases, o.seed, o.h);
    bool csv = o.format == "csv";
    if (csv) {
        os << "suite,cases,seed,passed,skipped,failed\n";
        os << r.suite << ',' << r.cases << ',' << r.seed << ',' << r.passed << ',' << r.skipped << ',' << r.failures.size() << '\n';
    }
    Summary s;
    if (!csv) {
        s.add("suite", r.suite);
        s.add("cases", std::to_string(r.cases));
        s.add("seed", std::to_string(r.seed));
        s.add("passed", std::to_string(r.passed));
        s.add("skipped", std::to_string(r.skipped));
        s.add("failed", std::to_string(r.failures.size()));
    }
    s.add("tolerance", r.tolerance);
    for (const auto& [tag, n] : r.tally) s.add("seen " + tag, std::to_string(n));
    std::filesystem::path dir = o.out.empty() ? "." : o.out;
    for (const auto& f : r.failures) {
        std::string where = "(no reproduction spec)";
        if (!f.repro_spec.empty()) {
            std::filesystem::create_directories(dir);
            auto path = dir / (r.suite + "-case" + std::to_string(f.index) + ".spec");
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            out << f.repro_spec;
            where = path.string();
        }
        s.add("failure " + std::to_string(f.index), f.message + " [seed " + std::to_string(f.case_seed) + "; repro " + where + "]");
    }
    s.write(os, csv);
    return r.failures.empty() ? 0 : 1;
}

using Handler = int (*)(const SpecDocument&, const std::vector<std::string>&, const Options&, std::ostream&);

int run_spec_command(const std::string& command, Handler handler, const Options& o, std::ostream& os) {
    SpecDocument doc = load_spec(o.spec);
    if (!o.subsets.empty()) return handler(doc, o.subsets, o, os);
    int status = 0, ran = 0;
    for (const auto& t : doc.tasks) {
        if (t.command != command) continue;
        Options local = o;
        if (!local.h) local.h = t.h;
        if (ran++) os << '\n';
        if (o.format == "csv") {
            os << "# task," << csv_field(t.command + " " + [&] {
                std::string j;
                for (const auto& n : t.subsets) j += (j.empty() ? "" : " ") + n;
                return j;
            }()) << '\n';
        }
        status = std::max(status, handler(doc, t.subsets, local, os));
    }
    if (!ran) throw UsageError("no --subset given and the spec has no " + command + " task");
    return status;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Centers, radii and related descriptors of subsets of metric spaces", "metric-center"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub, bool spec) {
        if (spec) {
            sub->add_option("--spec", o.spec, "spec file (JSON)")->required();
            sub->add_option("--subset", o.subsets, "subset name; repeat for products and unions");
        }
        sub->add_option("--h", o.h, "resolution override (grid step, finite-space h, or product oracle step)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "text"}));
        sub->add_option("--out", o.out, spec ? "write output to this file" : "directory for reproduction specs");
    };
    struct Entry {
        const char* name;
        const char* help;
        Handler handler;
    };
    const Entry entries[] = {
        {"analyze", "center, radius and the rest of the descriptor family", cmd_analyze},
        {"product", "center of a max-metric product", cmd_product},
        {"union", "center of a union of separated subsets", cmd_union},
        {"inscribe", "largest inscribed balls with a certificate", cmd_inscribe},
        {"filtrate", "sublevel filtration of the distance to the boundary", cmd_filtrate},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, true);
        subs.emplace_back(sub, &e);
    }
    auto* verify = app.add_subcommand("verify", "randomized property suites");
    add_common(verify, false);
    verify->add_option("--suite", o.suite, "suite name")->required();
    verify->add_option("--cases", o.cases, "number of random cases");
    verify->add_option("--seed", o.seed, "random seed")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    o.seed_given = verify->count("--seed") > 0;

    std::ofstream file;
    std::ostream* os = &out;
    try {
        if (*verify) return cmd_verify(o, out);
        if (!o.out.empty()) {
            file.open(o.out);
            if (!file) throw UsageError("cannot write \"" + o.out + "\"");
            os = &file;
        }
        for (const auto& [sub, e] : subs) {
            if (*sub) return run_spec_command(e->name, e->handler, o, *os);
        }
    } catch (const SpecError& e) {
        err << "spec error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace metric_center
