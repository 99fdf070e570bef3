#include "skewlab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "skewlab/errors.hpp"
#include "skewlab/hash.hpp"

namespace skewlab::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw config_error("config." + field + ": " + why);
}

Rational parse_rational(const json& v, const std::string& field) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    } catch (const std::exception& e) {
        bad(field, e.what());
    }
    bad(field, "expected a rational like \"p/q\" or an integer");
}

CirclePoint parse_point(const json& v, const std::string& field) {
    if (v.is_string()) return CirclePoint::exact(parse_rational(v, field));
    if (v.is_number()) return CirclePoint::approx(v.get<double>());
    bad(field, "expected a rational string or a number");
}

std::vector<std::uint64_t> parse_checkpoints(const json& v) {
    std::vector<std::uint64_t> cps;
    if (v.is_array()) {
        for (const auto& e : v) cps.push_back(e.get<std::uint64_t>());
    } else if (v.is_object() && v.contains("pow2_max")) {
        cps = pow2_checkpoints(v["pow2_max"].get<std::uint64_t>());
    } else {
        bad("checkpoints", "expected a list or {\"pow2_max\": n}");
    }
    if (cps.empty()) bad("checkpoints", "empty list");
    for (std::size_t i = 1; i < cps.size(); ++i)
        if (cps[i] <= cps[i - 1]) bad("checkpoints", "must be strictly increasing");
    return cps;
}

std::vector<std::uint64_t> parse_seeds(const json& v) {
    std::vector<std::uint64_t> seeds;
    if (v.is_array()) {
        for (const auto& e : v) seeds.push_back(e.get<std::uint64_t>());
    } else if (v.is_object() && v.contains("master")) {
        std::uint64_t master = v["master"].get<std::uint64_t>();
        std::uint64_t reps = v.value("replicates", 1u);
        if (reps == 0) bad("seeds.replicates", "must be positive");
        for (std::uint64_t i = 0; i < reps; ++i) seeds.push_back(split_seed(master, i));
    } else {
        bad("seeds", "expected a list or {\"master\": m, \"replicates\": r}");
    }
    if (seeds.empty()) bad("seeds", "empty seed list");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) bad("seeds", "seeds must be distinct");
    return seeds;
}

FieldGenerator parse_field(const json& v) {
    if (!v.is_object() || !v.contains("type")) bad("field", "expected {\"type\": ...}");
    std::string type = v["type"].get<std::string>();
    std::uint64_t seed = v.value("seed", 0u);
    if (type == "iid") {
        std::vector<Rational> probs;
        for (const auto& p : v.at("probs")) probs.push_back(parse_rational(p, "field.probs"));
        Alphabet a(probs.size());
        if (v.contains("values")) {
            std::vector<Rational> vals;
            for (const auto& x : v["values"]) vals.push_back(parse_rational(x, "field.values"));
            a = Alphabet(std::move(vals));
        }
        return FieldGenerator::iid(std::move(a), std::move(probs), seed);
    }
    if (type == "or") {
        Rational p = v.contains("latent_p") ? parse_rational(v["latent_p"], "field.latent_p")
                                            : Rational(1, 4);
        return FieldGenerator::or_field(seed, p);
    }
    if (type == "block_factor") {
        std::vector<Rational> lp;
        for (const auto& p : v.at("latent_probs"))
            lp.push_back(parse_rational(p, "field.latent_probs"));
        std::vector<Vec2> stencil;
        for (const auto& s : v.at("stencil"))
            stencil.push_back(Vec2{s.at(0).get<std::int64_t>(), s.at(1).get<std::int64_t>()});
        std::string factor = v.value("factor", "or");
        FieldGenerator::FactorFn fn;
        std::size_t out_k = 2;
        if (factor == "or" || factor == "max") {
            fn = [](std::span<const std::size_t> s) {
                std::size_t m = 0;
                for (std::size_t x : s) m = std::max(m, x);
                return m;
            };
        } else if (factor == "and" || factor == "min") {
            fn = [](std::span<const std::size_t> s) {
                std::size_t m = s[0];
                for (std::size_t x : s) m = std::min(m, x);
                return m;
            };
        } else if (factor == "xor") {
            fn = [](std::span<const std::size_t> s) {
                std::size_t m = 0;
                for (std::size_t x : s) m ^= (x & 1);
                return m;
            };
        } else {
            bad("field.factor", "unknown factor '" + factor + "'");
        }
        return FieldGenerator::block_factor(Alphabet(out_k), Alphabet(lp.size()), std::move(lp),
                                            std::move(stencil), std::move(fn), factor, seed);
    }
    if (type == "checkerboard") {
        return FieldGenerator::phase_checkerboard(v.value("period", 2), seed);
    }
    bad("field.type", "unknown field type '" + type + "'");
}

FTable parse_ftable(const json& obs, const Alphabet& a) {
    std::size_t m = obs.value("m", 1u);
    if (m == 0) bad("observable.m", "must be >= 1");
    if (obs.contains("f_table")) {
        std::vector<Rational> vals;
        for (const auto& x : obs["f_table"])
            vals.push_back(parse_rational(x, "observable.f_table"));
        return FTable(a.size(), m, std::move(vals), "table");
    }
    std::string f = obs.value("f", "identity");
    if (f == "identity") {
        if (m != 1) bad("observable", "f=identity requires m=1");
        return FTable::identity(a);
    }
    if (f == "product") return FTable::product(a, m);
    if (f == "all_equal") return FTable::all_equal(a, m);
    if (f.rfind("constant:", 0) == 0)
        return FTable::constant(a, m, Rational::parse(f.substr(9)));
    bad("observable.f", "unknown builtin '" + f + "'");
}

CylinderEvent parse_event(const json& v, const std::string& field) {
    if (v.is_string() && v.get<std::string>() == "never") return CylinderEvent::never();
    if (!v.is_object()) bad(field, "expected {\"sites\": ..., \"symbols\": ...} or \"never\"");
    std::vector<std::pair<Vec2, std::size_t>> cs;
    const auto& sites = v.at("sites");
    const auto& syms = v.at("symbols");
    if (sites.size() != syms.size()) bad(field, "sites/symbols size mismatch");
    for (std::size_t i = 0; i < sites.size(); ++i)
        cs.emplace_back(Vec2{sites[i].at(0).get<std::int64_t>(), sites[i].at(1).get<std::int64_t>()},
                        syms[i].get<std::size_t>());
    return CylinderEvent::require(std::move(cs));
}

}  // namespace

Slope parse_slope(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "golden") return Slope::irrational((std::sqrt(5.0) - 1.0) / 2.0);
        if (s == "sqrt2") return Slope::irrational(std::sqrt(2.0) - 1.0);
        try {
            Rational r = Rational::parse(s);
            return Slope::rational(r);
        } catch (const std::invalid_argument& e) {
            bad("slope", e.what());
        }
    }
    if (v.is_number()) {
        // a bare number is declared irrational; rationals are written "p/q"
        try {
            return Slope::irrational(v.get<double>());
        } catch (const std::invalid_argument& e) {
            bad("slope", e.what());
        }
    }
    bad("slope", "expected \"p/q\", a named constant, or a number in (0,1)");
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw config_error("config: document must be an object");
    ExperimentConfig cfg;
    cfg.raw = doc;

    int sv = doc.value("schema_version", -1);
    if (sv != kSchemaVersion)
        bad("schema_version", "expected " + std::to_string(kSchemaVersion));

    static const std::set<std::string> kinds{"average",  "limits", "check-growth",
                                             "check-c2", "mixing", "uniform",
                                             "equicontinuity"};
    cfg.kind = doc.value("kind", "");
    if (!kinds.count(cfg.kind)) bad("kind", "unknown experiment kind '" + cfg.kind + "'");

    if (doc.contains("slope")) cfg.slope = parse_slope(doc["slope"]);

    if (doc.contains("field")) cfg.field = parse_field(doc["field"]);

    if (doc.contains("coupling")) {
        const json& c = doc["coupling"];
        if (c.is_string() && c.get<std::string>() == "staircase") {
            if (!cfg.slope) bad("coupling", "staircase coupling needs a slope");
            cfg.coupling = Coupling::staircase(*cfg.slope);
        } else if (c.is_object() && c.contains("constant")) {
            const auto& k = c["constant"];
            cfg.coupling = Coupling::constant(
                Vec2{k.at(0).get<std::int64_t>(), k.at(1).get<std::int64_t>()});
        } else {
            bad("coupling", "expected \"staircase\" or {\"constant\": [k1,k2]}");
        }
    } else if (cfg.slope) {
        cfg.coupling = Coupling::staircase(*cfg.slope);
    }

    if (doc.contains("basis")) {
        const auto& b = doc["basis"];
        cfg.basis.v1 = Vec2{b.at(0).at(0).get<std::int64_t>(), b.at(0).at(1).get<std::int64_t>()};
        cfg.basis.v2 = Vec2{b.at(1).at(0).get<std::int64_t>(), b.at(1).at(1).get<std::int64_t>()};
        if (!cfg.basis.independent()) bad("basis", "vectors must be linearly independent");
    }

    if (doc.contains("observable")) {
        if (!cfg.field) bad("observable", "needs a field for the alphabet");
        FTable f = parse_ftable(doc["observable"], cfg.field->alphabet());
        if (doc["observable"].contains("window")) {
            std::vector<Vec2> win;
            for (const auto& s : doc["observable"]["window"])
                win.push_back(Vec2{s.at(0).get<std::int64_t>(), s.at(1).get<std::int64_t>()});
            cfg.observable = WindowObservable::fixed(std::move(win), std::move(f));
        } else {
            cfg.observable = WindowObservable::staircase(std::move(f));
        }
    }

    if (doc.contains("t") && doc.contains("grid")) bad("t", "give either t or grid, not both");
    if (doc.contains("t")) {
        cfg.t_points.push_back(parse_point(doc["t"], "t"));
    } else if (doc.contains("grid")) {
        const json& g = doc["grid"];
        std::string type = g.value("type", "uniform");
        std::size_t n = g.value("n", 64u);
        if (n == 0) bad("grid.n", "must be positive");
        if (type == "uniform") {
            if (g.contains("offset") && g["offset"].is_string()) {
                cfg.t_points =
                    TGrid::uniform(n, parse_rational(g["offset"], "grid.offset")).points;
            } else {
                cfg.t_points = TGrid::uniform_approx(n, g.value("offset", 0.0)).points;
            }
        } else if (type == "breakpoint_avoiding") {
            if (!cfg.slope) bad("grid", "breakpoint_avoiding grid needs a slope");
            std::int64_t m = cfg.observable ? static_cast<std::int64_t>(cfg.observable->m())
                                            : g.value("m", 2);
            cfg.t_points = TGrid::breakpoint_avoiding(n, *cfg.slope, m).points;
            cfg.grid_breakpoint_avoiding = true;
        } else {
            bad("grid.type", "unknown grid type '" + type + "'");
        }
    }

    if (doc.contains("checkpoints")) cfg.checkpoints = parse_checkpoints(doc["checkpoints"]);
    if (doc.contains("seeds")) cfg.seeds = parse_seeds(doc["seeds"]);
    cfg.tolerance = doc.value("tolerance", 0.01);
    if (cfg.tolerance < 0) bad("tolerance", "must be nonnegative");
    cfg.c2_threshold = doc.value("threshold", 0);

    if (doc.contains("limit")) {
        std::string p = doc["limit"].get<std::string>();
        if (p == "auto") cfg.limit_policy = LimitPolicy::automatic;
        else if (p == "ergodic_product") cfg.limit_policy = LimitPolicy::ergodic_product;
        else if (p == "staircase_rational") cfg.limit_policy = LimitPolicy::staircase_rational;
        else if (p == "staircase_irrational") cfg.limit_policy = LimitPolicy::staircase_irrational;
        else if (p == "m2_mixture") cfg.limit_policy = LimitPolicy::m2_mixture;
        else if (p == "none") cfg.limit_policy = LimitPolicy::none;
        else bad("limit", "unknown limit policy '" + p + "'");
    }

    if (doc.contains("growth")) {
        for (const auto& n : doc["growth"].at("n_list"))
            cfg.growth_n.push_back(n.get<std::uint64_t>());
        for (const auto& m : doc["growth"].at("m_list"))
            cfg.growth_m.push_back(m.get<std::uint64_t>());
        if (cfg.growth_n.empty() || cfg.growth_m.empty())
            bad("growth", "n_list and m_list must be nonempty");
    }

    if (doc.contains("mixing")) {
        const json& mx = doc["mixing"];
        cfg.event_a = parse_event(mx.at("A"), "mixing.A");
        cfg.event_b = parse_event(mx.at("B"), "mixing.B");
        cfg.mixing_samples = mx.value("samples", 0u);
        if (mx.contains("shifts")) {
            for (const auto& k : mx["shifts"])
                cfg.shifts.push_back(Vec2{k.at(0).get<std::int64_t>(), k.at(1).get<std::int64_t>()});
        } else if (mx.contains("staircase_n")) {
            if (!cfg.slope || cfg.t_points.empty())
                bad("mixing.staircase_n", "needs a slope and t");
            std::uint64_t n = mx["staircase_n"].get<std::uint64_t>();
            cocycle_scan(cfg.t_points.front(), *cfg.slope, Coupling::staircase(*cfg.slope),
                         n, [&](std::uint64_t, Vec2 k) { cfg.shifts.push_back(k); });
            cfg.shifts.insert(cfg.shifts.begin(), Vec2{0, 0});  // kappa_0
            cfg.shifts.pop_back();
        } else {
            bad("mixing", "needs shifts or staircase_n");
        }
        if (cfg.shifts.empty()) bad("mixing.shifts", "empty shift list");
    }

    if (doc.contains("equicontinuity")) {
        const json& eq = doc["equicontinuity"];
        for (const auto& d : eq.at("deltas")) cfg.deltas.push_back(d.get<double>());
        for (const auto& n : eq.at("n_list")) cfg.n_list.push_back(n.get<std::uint64_t>());
        if (cfg.deltas.empty() || cfg.n_list.empty())
            bad("equicontinuity", "deltas and n_list must be nonempty");
    }

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        cfg.sweep_axis = sw.value("axis", "");
        if (cfg.sweep_axis != "lambda" && cfg.sweep_axis != "t" && cfg.sweep_axis != "m")
            bad("sweep.axis", "expected lambda, t, or m");
        if (!sw.contains("values") || sw["values"].empty())
            bad("sweep.values", "sweep axis list must be nonempty");
        for (const auto& v : sw["values"]) cfg.sweep_values.push_back(v);
    }

    cfg.out_path = doc.value("out", "");

    // per-kind requirements
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw config_error("config: kind=" + cfg.kind + " requires " + what);
    };
    if (cfg.kind == "average" || cfg.kind == "uniform") {
        need(cfg.slope.has_value(), "a slope");
        need(cfg.field.has_value(), "a field");
        need(cfg.observable.has_value(), "an observable");
        need(!cfg.t_points.empty(), "t or grid");
        need(!cfg.checkpoints.empty(), "checkpoints");
        need(!cfg.seeds.empty(), "seeds");
    } else if (cfg.kind == "limits") {
        need(cfg.slope.has_value(), "a slope");
        need(cfg.field.has_value(), "a field");
        need(cfg.observable.has_value(), "an observable");
    } else if (cfg.kind == "check-growth") {
        need(cfg.slope.has_value(), "a slope");
        need(!cfg.growth_n.empty(), "growth.n_list / growth.m_list");
        need(!cfg.t_points.empty(), "t or grid");
    } else if (cfg.kind == "check-c2") {
        need(cfg.slope.has_value(), "a slope");
        need(!cfg.t_points.empty(), "t or grid");
        need(!cfg.checkpoints.empty(), "checkpoints");
    } else if (cfg.kind == "mixing") {
        need(cfg.field.has_value(), "a field");
        need(cfg.event_a.has_value() && cfg.event_b.has_value(), "mixing.A and mixing.B");
    } else if (cfg.kind == "equicontinuity") {
        need(cfg.slope.has_value(), "a slope");
        need(cfg.field.has_value(), "a field");
        need(cfg.observable.has_value(), "an observable");
        need(!cfg.deltas.empty(), "equicontinuity.deltas");
        need(!cfg.seeds.empty(), "seeds");
    }
    return cfg;
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    try {
        return json::parse(in, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw config_error("config: " + std::string(e.what()));
    }
}

std::string canonical_config(const json& doc) {
    json d = doc;
    d.erase("out");
    return d.dump();
}

std::string config_digest(const json& doc) {
    std::uint64_t h = fnv1a64(canonical_config(doc));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace skewlab::cli
