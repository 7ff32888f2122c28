#include "metric_center/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "metric_center/filtration.hpp"
#include "metric_center/product_ops.hpp"
#include "metric_center/spec.hpp"
#include "metric_center/union_ops.hpp"

namespace metric_center {

namespace {

using json = nlohmann::json;
using Rng = std::mt19937_64;

const IntervalSet R = IntervalSet::real_line();

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class Status { pass, skip, fail };

struct Outcome {
    Status status = Status::pass;
    std::string message;
    std::string tag;  // tallied on pass
};

Outcome fail(std::string msg) { return {Status::fail, std::move(msg), {}}; }
Outcome skip() { return {Status::skip, {}, {}}; }

struct CaseResult {
    Outcome outcome;
    std::uint64_t seed = 0;
    std::string repro;
};

// ---------------------------------------------------------------- line cases

struct LineCase {
    IntervalSet ambient = R;
    std::vector<IntervalSet> parts;
};

IntervalSet random_set(Rng& rng, int max_pieces = 3, int den = 5, int span = 2) {
    std::uniform_int_distribution<int> count(1, max_pieces), tick(-span * den, span * den);
    std::bernoulli_distribution coin(0.5), point(0.15);
    std::vector<Interval> raw;
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
        int a = tick(rng), b = tick(rng);
        if (a > b) std::swap(a, b);
        if (a == b || point(rng)) {
            raw.push_back(Interval::point(Rational(a, den)));
        } else {
            raw.push_back({Rational(a, den), coin(rng), Rational(b, den), coin(rng)});
        }
    }
    return IntervalSet::normalize(raw);
}

// ℝ, or a bounded window or ℝ itself with one to three gaps cut out
IntervalSet random_ambient(Rng& rng) {
    std::uniform_int_distribution<int> kind(0, 2), gaps(1, 3), tick(-15, 15), width(1, 4);
    std::bernoulli_distribution coin(0.5);
    int k = kind(rng);
    if (k == 0) return R;
    IntervalSet Y = k == 1 ? R : IntervalSet::closed(-3, 3);
    int g = gaps(rng);
    for (int i = 0; i < g; ++i) {
        int a = tick(rng);
        Rational lo(a, 5), hi(a + width(rng), 5);
        Y = Y - IntervalSet::normalize({{lo, coin(rng), hi, coin(rng)}});
    }
    return Y;
}

bool usable_part(const IntervalSet& A, const IntervalSet& Y) {
    if (A.empty()) return false;
    auto d = descriptors_line(A, Y);
    return !d.clopen && d.radius.is_finite();
}

bool pairwise_separated(const std::vector<IntervalSet>& parts, const IntervalSet& Y) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            if (!separated_check(parts[i], parts[j], Y).separated) return false;
        }
    }
    return true;
}

std::vector<Rational> lattice(int lo, int hi, int den) {
    std::vector<Rational> out;
    for (int k = lo * den; k <= hi * den; ++k) out.emplace_back(k, den);
    return out;
}

Outcome check_union(const LineCase& c) {
    for (const auto& P : c.parts) {
        if (!P.is_subset_of(c.ambient) || !usable_part(P, c.ambient)) return skip();
    }
    if (!pairwise_separated(c.parts, c.ambient)) return skip();
    IntervalSet all;
    for (const auto& P : c.parts) all = all | P;
    auto direct = descriptors_line(all, c.ambient);
    LineUnion u = c.parts.size() == 2 ? union_descriptors(c.parts[0], c.parts[1], c.ambient)
                                      : union_descriptors_n(c.parts, c.ambient);
    std::ostringstream why;
    if (u.center_determined) {
        if (!(u.center == direct.center)) why << "center " << u.center.str() << " vs direct " << direct.center.str() << "; ";
        if (!(u.radius == direct.radius)) why << "radius " << u.radius.str() << " vs direct " << direct.radius.str() << "; ";
    }
    if (!u.srad.contains(direct.semi_radius)) {
        why << "semi-radius " << direct.semi_radius.str() << " outside " << u.srad.str() << "; ";
    }
    // the union radius never exceeds the largest part radius when the center is known
    if (!why.str().empty()) return fail("[" + case_tag(u.tag) + "] " + why.str());
    return {Status::pass, {}, case_tag(u.tag)};
}

Outcome check_line_consistency(const LineCase& c) {
    const IntervalSet& A = c.parts.at(0);
    const IntervalSet& Y = c.ambient;
    if (!A.is_subset_of(Y)) return skip();
    auto d = descriptors_line(A, Y);
    std::ostringstream why;
    for (const auto& issue : report_consistency_check(d)) why << issue << "; ";
    IntervalSet bd = topology_line(A, Y).boundary;
    if (!d.clopen && d.center.empty() == d.radius.is_finite()) why << "center/radius disagree; ";
    if (!d.clopen && d.radius.is_finite() && !(d.radius == d.semi_radius)) why << "attained radius differs from semi-radius; ";
    for (const auto& x : lattice(-4, 4, 20)) {
        if (!A.contains(x) || d.clopen) continue;
        ExactExt dist = distance_to(x, bd);
        if (d.semi_radius < dist) {
            why << "d(" << x.str() << ") = " << dist.str() << " above Srad; ";
            break;
        }
        if (d.radius.is_finite() && d.center.contains(x) != (dist == d.radius)) {
            why << "center membership wrong at " << x.str() << "; ";
            break;
        }
    }
    if (!why.str().empty()) return fail(why.str());
    return {Status::pass, {}, d.clopen ? "clopen" : d.radius.is_finite() ? "finite-radius" : "infinite-radius"};
}

Outcome check_product(const LineCase& c, double h) {
    const IntervalSet& A = c.parts.at(0);
    const IntervalSet& B = c.parts.at(1);
    if (A.empty() || B.empty() || !A.is_bounded() || !B.is_bounded()) return skip();
    auto p = product_center(A, R, B, R);
    auto ra = descriptors_line(A, R), rb = descriptors_line(B, R);
    std::ostringstream why;
    if (!(p.radius == std::min(ra.radius, rb.radius))) why << "radius " << p.radius.str() << " is not the least factor radius; ";
    IntervalSet bA = topology_line(A, R).boundary, bB = topology_line(B, R).boundary;
    auto grid = lattice(-3, 3, 20);
    std::vector<std::pair<Rational, ExactExt>> pa, pb;
    for (const auto& x : grid) {
        if (A.contains(x)) pa.emplace_back(x, distance_to(x, bA));
        if (B.contains(x)) pb.emplace_back(x, distance_to(x, bB));
    }
    bool reported = false;
    for (const auto& [x, dx] : pa) {
        for (const auto& [y, dy] : pb) {
            // max-metric distance to ∂(A×B) = (∂A × cl B) ∪ (cl A × ∂B)
            ExactExt v = std::min(dx, dy);
            bool in = !p.center_empty && p.factors[0].contains(x) && p.factors[1].contains(y);
            if (p.radius < v || in != (v == p.radius)) {
                why << "center membership wrong at (" << x.str() << ", " << y.str() << "); ";
                reported = true;
                break;
            }
        }
        if (reported) break;
    }
    auto cmp = product_oracle({Factor::line(A), Factor::line(B)}, h);
    if (cmp.compared && (cmp.radius_deviation > 4 * h + 1e-9 || cmp.hausdorff > 4 * h + 1e-9)) {
        why << "sampled product off by radius " << cmp.radius_deviation << ", centers " << cmp.hausdorff << "; ";
    }
    if (!why.str().empty()) return fail(why.str());
    return {Status::pass, {}, case_tag(p.tag)};
}

std::string line_repro(const LineCase& c, const std::string& command, std::optional<double> h) {
    SpecDocument doc;
    doc.spaces["Y"] = LineAmbient{c.ambient};
    TaskSpec t{command, {}, h};
    const char* names[] = {"A", "B", "C", "D", "E"};
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
        SubsetSpec s;
        s.space = "Y";
        s.set = c.parts[i];
        doc.subsets[names[i]] = s;
        t.subsets.emplace_back(names[i]);
    }
    doc.tasks.push_back(t);
    return emit_spec(doc);
}

// Smaller candidates for one endpoint, on the same lattice: zero, the integer
// toward zero, one tick toward zero.
std::vector<Rational> smaller(const Rational& v) {
    Rational tick(1, v.den());
    std::vector<Rational> out{Rational(0), Rational(v.num() / v.den()), v < Rational(0) ? v + tick : v - tick};
    std::vector<Rational> keep;
    Rational mag = v < Rational(0) ? -v : v;
    for (const auto& c : out) {
        Rational m = c < Rational(0) ? -c : c;
        if (m < mag && std::find(keep.begin(), keep.end(), c) == keep.end()) keep.push_back(c);
    }
    return keep;
}

// Greedy shrink: drop pieces first, then pull endpoints toward zero, keeping
// the failure.
LineCase minimize(LineCase c, const std::function<Outcome(const LineCase&)>& check) {
    auto fails = [&](const LineCase& k) {
        try {
            return check(k).status == Status::fail;
        } catch (const std::exception&) {
            return true;
        }
    };
    for (int round = 0; round < 200; ++round) {
        bool progress = false;
        for (std::size_t s = 0; s < c.parts.size() && !progress; ++s) {
            const auto& pieces = c.parts[s].pieces();
            if (pieces.size() < 2) continue;
            for (std::size_t j = 0; j < pieces.size() && !progress; ++j) {
                auto raw = pieces;
                raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(j));
                LineCase k = c;
                k.parts[s] = IntervalSet::normalize(raw);
                if (fails(k)) {
                    c = k;
                    progress = true;
                }
            }
        }
        for (std::size_t s = 0; s < c.parts.size() && !progress; ++s) {
            const auto pieces = c.parts[s].pieces();
            for (std::size_t j = 0; j < pieces.size() && !progress; ++j) {
                for (int end = 0; end < 2 && !progress; ++end) {
                    const LineCoord& e = end == 0 ? pieces[j].lo : pieces[j].hi;
                    if (!e.is_finite()) continue;
                    for (const auto& cand : smaller(e.value())) {
                        auto raw = pieces;
                        (end == 0 ? raw[j].lo : raw[j].hi) = cand;
                        if (raw[j].hi < raw[j].lo) continue;
                        if (raw[j].lo == raw[j].hi) raw[j].lo_closed = raw[j].hi_closed = true;
                        LineCase k = c;
                        k.parts[s] = IntervalSet::normalize(raw);
                        if (fails(k)) {
                            c = k;
                            progress = true;
                            break;
                        }
                    }
                }
            }
        }
        if (!progress) break;
    }
    return c;
}

template <typename Draw, typename Check>
CaseResult run_line_case(Rng& rng, Draw draw, Check check, const std::string& command, std::optional<double> h) {
    for (int attempt = 0; attempt < 5000; ++attempt) {
        LineCase c = draw(rng);
        Outcome o;
        try {
            o = check(c);
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        if (o.status == Status::skip) continue;
        CaseResult r{o, 0, {}};
        if (o.status == Status::fail) {
            LineCase small = minimize(c, check);
            Outcome again;
            try {
                again = check(small);
            } catch (const std::exception& e) {
                again = fail(std::string("exception: ") + e.what());
            }
            r.outcome.message = again.message.empty() ? o.message : again.message;
            r.repro = line_repro(small, command, h);
        }
        return r;
    }
    return {skip(), 0, {}};
}

// ---------------------------------------------------------------- grid cases

Mask random_mask(Rng& rng, int w, int h) {
    std::uniform_real_distribution<double> density(0.2, 0.8);
    std::bernoulli_distribution on(density(rng));
    Mask m(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (auto&& b : m) b = on(rng);
    return m;
}

// Spec whose grid subset rasterizes to exactly the given mask: one small box
// per occupied cell on the unit lattice.
std::string mask_repro(const Mask& m, int w, int h, const std::string& command) {
    SpecDocument doc;
    doc.spaces["G"] = GridAmbient{{-2.0, -2.0}, {w + 1.0, h + 1.0}, 1.0};
    json boxes = json::array();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!m[static_cast<std::size_t>(y * w + x)]) continue;
            boxes.push_back({{"box", {{"lo", {x - 0.25, y - 0.25}}, {"hi", {x + 0.25, y + 0.25}}}}});
        }
    }
    SubsetSpec s;
    s.space = "G";
    s.shape = boxes.empty() ? json{{"empty", 2}} : json{{"union", boxes}};
    doc.subsets["S"] = s;
    doc.tasks.push_back({command, {"S"}, std::nullopt});
    return emit_spec(doc);
}

CaseResult grid_distance_case(Rng& rng) {
    std::uniform_int_distribution<int> side(2, 48);
    int w = side(rng), h = side(rng);
    Mask S = random_mask(rng, w, h);
    if (rng() % 10 == 0) std::fill(S.begin(), S.end(), false);
    auto G = GridRegion::from_occupancy({w, h}, {0, 0}, 1.0, Mask(S.size(), true));
    auto field = distance_to_set(G, S);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t best = -1;
            for (int v = 0; v < h; ++v) {
                for (int u = 0; u < w; ++u) {
                    if (!S[static_cast<std::size_t>(v * w + u)]) continue;
                    std::int64_t d = std::int64_t(x - u) * (x - u) + std::int64_t(y - v) * (y - v);
                    if (best < 0 || d < best) best = d;
                }
            }
            if (field.squared[static_cast<std::size_t>(y * w + x)] != best) {
                std::ostringstream msg;
                msg << "cell (" << x << "," << y << "): squared distance " << field.squared[static_cast<std::size_t>(y * w + x)]
                    << " vs brute force " << best;
                return {fail(msg.str()), 0, mask_repro(S, w, h, "analyze")};
            }
        }
    }
    return {{Status::pass, {}, "ok"}, 0, {}};
}

std::size_t flood(const Mask& m, int w, int h, bool diagonal, bool complement) {
    std::vector<char> seen(m.size(), 0);
    std::size_t comps = 0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s] == complement || seen[s]) continue;
        ++comps;
        std::deque<std::size_t> q{s};
        seen[s] = 1;
        while (!q.empty()) {
            auto c = q.front();
            q.pop_front();
            int x = static_cast<int>(c % static_cast<std::size_t>(w)), y = static_cast<int>(c / static_cast<std::size_t>(w));
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dx == 0 && dy == 0) || (!diagonal && dx != 0 && dy != 0)) continue;
                    int u = x + dx, v = y + dy;
                    if (u < 0 || v < 0 || u >= w || v >= h) continue;
                    auto n = static_cast<std::size_t>(v * w + u);
                    if (m[n] == complement || seen[n]) continue;
                    seen[n] = 1;
                    q.push_back(n);
                }
            }
        }
    }
    return comps;
}

// β₁ from χ = V − E + F of the cubical complex on occupied cells (4-adjacent
// edges, full 2×2 blocks as faces).
long euler_betti1(const Mask& m, int w, int h) {
    auto at = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && m[static_cast<std::size_t>(y * w + x)]; };
    long V = 0, E = 0, F = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!at(x, y)) continue;
            ++V;
            if (at(x + 1, y)) ++E;
            if (at(x, y + 1)) ++E;
            if (at(x + 1, y) && at(x, y + 1) && at(x + 1, y + 1)) ++F;
        }
    }
    return static_cast<long>(flood(m, w, h, false, false)) - (V - E + F);
}

CaseResult betti_case(Rng& rng) {
    std::uniform_int_distribution<int> side(2, 96);
    int w = side(rng), h = side(rng);
    Mask S = random_mask(rng, w, h);
    auto G = GridRegion::from_occupancy({w, h}, {0, 0}, 1.0, S);
    std::size_t b0 = betti0(G, S), b1 = betti1_planar(G, S);
    std::size_t f0 = flood(S, w, h, false, false);
    long e1 = euler_betti1(S, w, h);
    if (b0 != f0 || static_cast<long>(b1) != e1) {
        std::ostringstream msg;
        msg << w << "x" << h << ": betti0 " << b0 << " vs flood fill " << f0 << ", betti1 " << b1 << " vs Euler " << e1;
        return {fail(msg.str()), 0, mask_repro(S, w, h, "filtrate")};
    }
    return {{Status::pass, {}, "ok"}, 0, {}};
}

json random_shape_json(Rng& rng) {
    std::uniform_real_distribution<double> pos(-0.6, 0.6), rad(0.15, 0.5), half(0.1, 0.45);
    std::uniform_int_distribution<int> count(1, 3);
    std::bernoulli_distribution coin(0.5), hole(0.25);
    auto r3 = [](double v) { return std::round(v * 1000) / 1000; };
    json parts = json::array();
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
        double cx = r3(pos(rng)), cy = r3(pos(rng));
        if (coin(rng)) {
            parts.push_back({{"ball", {{"center", {cx, cy}}, {"radius", r3(rad(rng))}, {"closed", coin(rng)}}}});
        } else {
            double a = r3(half(rng)), b = r3(half(rng));
            parts.push_back({{"box", {{"lo", {cx - a, cy - b}}, {"hi", {cx + a, cy + b}}, {"closed", coin(rng)}}}});
        }
    }
    json shape = parts.size() == 1 ? parts[0] : json{{"union", parts}};
    if (hole(rng)) {
        shape = {{"difference", {shape, {{"ball", {{"center", {r3(pos(rng)), r3(pos(rng))}}, {"radius", 0.1}, {"closed", false}}}}}}};
    }
    return shape;
}

CaseResult inscribe_case(Rng& rng, double h) {
    json shape = random_shape_json(rng);
    GridAmbient box{{-1.3, -1.3}, {1.3, 1.3}, h};
    SubsetSpec s;
    s.space = "G";
    s.shape = shape;
    GridRegion G = build_grid(box, s);
    if (set_empty(G.occupancy())) return {skip(), 0, {}};
    auto balls = largest_inscribed_balls(G);
    if (!balls.exists) return {{Status::pass, {}, "no-ball"}, 0, {}};
    if (!balls.certificate_inside || !balls.certificate_maximal) {
        SpecDocument doc;
        doc.spaces["G"] = box;
        doc.subsets["S"] = s;
        doc.tasks.push_back({"inscribe", {"S"}, std::nullopt});
        std::string msg = std::string("certificate failed: inside ") + (balls.certificate_inside ? "ok" : "broken") +
                          ", maximal " + (balls.certificate_maximal ? "ok" : "broken") + ", r = " + balls.radius.str();
        return {fail(msg), 0, emit_spec(doc)};
    }
    return {{Status::pass, {}, "certified"}, 0, {}};
}

// ---------------------------------------------------------------- runner

using CaseFn = std::function<CaseResult(Rng&)>;

struct Suite {
    CaseFn run;
    std::string tolerance;
};

Suite make_suite(const std::string& name, std::optional<double> h) {
    if (name == "union-line") {
        auto draw = [](Rng& rng) {
            LineCase c;
            c.ambient = random_ambient(rng);
            c.parts = {random_set(rng) & c.ambient, random_set(rng) & c.ambient};
            return c;
        };
        return {[=](Rng& rng) { return run_line_case(rng, draw, check_union, "union", std::nullopt); }, "exact"};
    }
    if (name == "union-triples") {
        auto draw = [](Rng& rng) {
            LineCase c;
            for (int i = 0; i < 3; ++i) c.parts.push_back(random_set(rng, 2, 5, 4));
            return c;
        };
        return {[=](Rng& rng) { return run_line_case(rng, draw, check_union, "union", std::nullopt); }, "exact"};
    }
    if (name == "product-line") {
        double step = h.value_or(0.02);
        auto draw = [](Rng& rng) {
            LineCase c;
            c.parts = {random_set(rng), random_set(rng)};
            return c;
        };
        auto check = [step](const LineCase& c) { return check_product(c, step); };
        std::ostringstream tol;
        tol << "exact; sampled oracle within 4h at h = " << step;
        return {[=](Rng& rng) { return run_line_case(rng, draw, check, "product", step); }, tol.str()};
    }
    if (name == "line-consistency") {
        auto draw = [](Rng& rng) {
            LineCase c;
            c.ambient = random_ambient(rng);
            c.parts = {random_set(rng, 4) & c.ambient};
            return c;
        };
        return {[=](Rng& rng) { return run_line_case(rng, draw, check_line_consistency, "analyze", std::nullopt); }, "exact"};
    }
    if (name == "grid-distance") return {grid_distance_case, "exact (integer squared distances)"};
    if (name == "betti") return {betti_case, "exact"};
    if (name == "inscribe") {
        double step = h.value_or(0.02);
        std::ostringstream tol;
        tol << "certificate at h = " << step;
        return {[step](Rng& rng) { return inscribe_case(rng, step); }, tol.str()};
    }
    throw std::invalid_argument("unknown suite \"" + name + "\"");
}

}  // namespace

std::vector<std::string> verify_suites() {
    return {"union-line", "union-triples", "product-line", "line-consistency", "grid-distance", "betti", "inscribe"};
}

VerifyReport run_verify(const std::string& suite, std::size_t cases, std::uint64_t seed, std::optional<double> h,
                        unsigned threads) {
    Suite s = make_suite(suite, h);
    std::vector<CaseResult> results(cases);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases; i = next++) {
            std::uint64_t cs = mix(seed ^ mix(i));
            Rng rng(cs);
            try {
                results[i] = s.run(rng);
            } catch (const std::exception& e) {
                results[i] = {fail(std::string("exception: ") + e.what()), 0, {}};
            }
            results[i].seed = cs;
        }
    };
    if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    VerifyReport out;
    out.suite = suite;
    out.cases = cases;
    out.seed = seed;
    out.tolerance = s.tolerance;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto& r = results[i];
        switch (r.outcome.status) {
            case Status::pass:
                ++out.passed;
                if (!r.outcome.tag.empty()) ++out.tally[r.outcome.tag];
                break;
            case Status::skip: ++out.skipped; break;
            case Status::fail: out.failures.push_back({i, r.seed, r.outcome.message, r.repro}); break;
        }
    }
    return out;
}

}  // namespace metric_center
