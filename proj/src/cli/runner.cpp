#include "skewlab/cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "skewlab/diagnostics.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/lattice.hpp"
#include "skewlab/limits.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab::cli {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string exact_str(const std::optional<Rational>& r) {
    return r ? r->str() : std::string{};
}

/// How the oracle limit is obtained for an (average|uniform|verify) run.
struct LimitResolution {
    bool verifiable = false;
    std::string reason;
    bool t_dependent = false;
    std::function<LimitValue(const CirclePoint&)> at;
};

LimitResolution resolve_limit(const ExperimentConfig& cfg) {
    LimitResolution res;
    const auto& obs = *cfg.observable;
    const auto& gen = *cfg.field;
    const Slope& slope = *cfg.slope;

    LimitPolicy policy = cfg.limit_policy;
    if (policy == LimitPolicy::none) {
        res.reason = "limit policy 'none'";
        return res;
    }
    if (policy == LimitPolicy::automatic) {
        if (!gen.mixing_certified()) {
            res.reason =
                "field '" + gen.describe() +
                "' carries no mixing certificate (non-ergodic fibre): not verifiable";
            return res;
        }
        if (obs.shape_rule() == WindowObservable::ShapeRule::fixed || obs.m() == 1)
            policy = LimitPolicy::ergodic_product;
        else if (slope.is_rational())
            policy = LimitPolicy::staircase_rational;
        else
            policy = LimitPolicy::staircase_irrational;
    }

    switch (policy) {
        case LimitPolicy::ergodic_product: {
            LimitValue v = limit_ergodic_product(gen, obs);
            res.at = [v](const CirclePoint&) { return v; };
            break;
        }
        case LimitPolicy::staircase_rational: {
            if (!slope.is_rational())
                throw config_error("limit: staircase_rational needs a rational slope");
            FTable f = obs.f();
            res.at = [f, slope, &gen](const CirclePoint& t) {
                return limit_staircase_rational(gen, f, slope, t);
            };
            res.t_dependent = true;
            break;
        }
        case LimitPolicy::staircase_irrational: {
            if (slope.is_rational())
                throw config_error("limit: staircase_irrational needs an irrational slope");
            LimitValue v = limit_staircase_irrational(gen, obs.f(), slope);
            res.at = [v](const CirclePoint&) { return v; };
            break;
        }
        case LimitPolicy::m2_mixture: {
            LimitValue v = limit_m2_mixture(gen, obs.f(), slope);
            res.at = [v](const CirclePoint&) { return v; };
            break;
        }
        default:
            res.reason = "no limit policy";
            return res;
    }
    res.verifiable = true;
    return res;
}

std::vector<AverageSeries> run_orbits(const ExperimentConfig& cfg, unsigned threads) {
    SkewSystem sys{*cfg.slope, *cfg.coupling, cfg.basis, *cfg.field};
    std::size_t nt = cfg.t_points.size();
    std::size_t ns = cfg.seeds.size();
    std::vector<AverageSeries> series(nt * ns);
    parallel_for(nt * ns, threads, [&](std::size_t idx) {
        std::size_t ti = idx / ns;
        std::size_t si = idx % ns;
        series[idx] =
            ergodic_average(sys, *cfg.observable, cfg.t_points[ti], cfg.seeds[si],
                            cfg.checkpoints);
    });
    return series;
}

RunResult run_average(const ExperimentConfig& cfg, unsigned threads) {
    LimitResolution lim = resolve_limit(cfg);
    std::vector<std::optional<LimitValue>> limit_at_t(cfg.t_points.size());
    if (lim.verifiable)
        for (std::size_t ti = 0; ti < cfg.t_points.size(); ++ti)
            limit_at_t[ti] = lim.at(cfg.t_points[ti]);

    std::vector<AverageSeries> series = run_orbits(cfg, threads);

    RunResult out;
    std::size_t ns = cfg.seeds.size();
    for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
        for (std::size_t ti = 0; ti < cfg.t_points.size(); ++ti) {
            for (std::size_t si = 0; si < ns; ++si) {
                const AverageSeries& s = series[ti * ns + si];
                Row r;
                r.n = cfg.checkpoints[c];
                r.t_index = ti;
                r.t = cfg.t_points[ti].value();
                r.seed_index = si;
                r.seed = cfg.seeds[si];
                r.value = s.averages[c];
                r.exact = exact_str(s.exact[c]);
                if (limit_at_t[ti]) {
                    r.limit = limit_at_t[ti]->value;
                    r.limit_exact = exact_str(limit_at_t[ti]->exact);
                    r.error = std::fabs(s.averages[c] - limit_at_t[ti]->value);
                    r.formula = LimitValue::formula_name(limit_at_t[ti]->tag);
                }
                out.rows.push_back(std::move(r));
            }
        }
    }
    std::uint64_t warnings = 0;
    for (const auto& s : series) warnings += s.boundary_warnings;
    std::ostringstream rep;
    rep << "average: " << cfg.t_points.size() << " t-point(s) x " << ns << " seed(s), n_max="
        << cfg.checkpoints.back() << ", boundary_warnings=" << warnings << "\n";
    if (!lim.verifiable && cfg.limit_policy != LimitPolicy::none)
        rep << "note: " << lim.reason << "\n";
    out.report = rep.str();
    return out;
}

RunResult run_limits(const ExperimentConfig& cfg) {
    RunResult out;
    const auto& obs = *cfg.observable;
    const auto& gen = *cfg.field;
    const Slope& slope = *cfg.slope;

    auto push = [&](const LimitValue& v, std::optional<double> t, const std::string& label) {
        Row r;
        r.t = t;
        r.value = v.value;
        r.exact = exact_str(v.exact);
        r.formula = LimitValue::formula_name(v.tag);
        r.label = label.empty() ? v.provenance : label;
        out.rows.push_back(std::move(r));
    };

    if (obs.shape_rule() == WindowObservable::ShapeRule::fixed || obs.m() == 1)
        push(limit_ergodic_product(gen, obs), std::nullopt, "");

    if (obs.shape_rule() == WindowObservable::ShapeRule::staircase) {
        if (slope.is_rational()) {
            std::vector<CirclePoint> ts = cfg.t_points;
            if (ts.empty()) ts.push_back(CirclePoint::exact(Rational(0)));
            for (std::size_t ti = 0; ti < ts.size(); ++ti) {
                BoundaryLog log;
                LimitValue v = limit_staircase_rational(gen, obs.f(), slope, ts[ti], &log);
                Row r;
                r.t_index = ti;
                r.t = ts[ti].value();
                r.value = v.value;
                r.exact = exact_str(v.exact);
                r.formula = LimitValue::formula_name(v.tag);
                r.label = log.near_floor_boundary
                              ? "boundary_warning:" + std::to_string(log.near_floor_boundary)
                              : "";
                out.rows.push_back(std::move(r));
            }
        } else {
            push(limit_staircase_irrational(gen, obs.f(), slope), std::nullopt, "");
        }
        if (obs.m() == 2) push(limit_m2_mixture(gen, obs.f(), slope), std::nullopt, "");
    }
    out.report = "limits: " + std::to_string(out.rows.size()) + " formula evaluation(s)\n";
    return out;
}

RunResult run_check_growth(const ExperimentConfig& cfg) {
    RunResult out;
    TGrid grid{cfg.t_points};
    bool staircase = cfg.coupling->kind() == Coupling::Kind::staircase;
    for (std::uint64_t n : cfg.growth_n) {
        for (std::uint64_t m : cfg.growth_m) {
            double stat = growth_condition_stat(*cfg.slope, *cfg.coupling, grid, n, m);
            Row r;
            r.n = n;
            r.value = stat;
            r.label = "m=" + std::to_string(m);
            if (staircase) {
                double bound = (static_cast<double>(n) * (2.0 * m + 1.0) -
                                static_cast<double>(m) * (m + 1.0)) /
                               (static_cast<double>(n) * static_cast<double>(n));
                r.limit = bound;
                r.error = stat - bound;
                r.formula = "pair_band_bound";
            }
            out.rows.push_back(std::move(r));
        }
    }
    out.report = "check-growth: " + std::to_string(out.rows.size()) + " (n,m) cell(s)\n";
    return out;
}

RunResult run_check_c2(const ExperimentConfig& cfg) {
    RunResult out;
    TGrid grid{cfg.t_points};
    C2Result c2 = check_c2(*cfg.slope, *cfg.coupling, grid, cfg.checkpoints);
    for (std::size_t i = 0; i < c2.checkpoints.size(); ++i) {
        Row r;
        r.n = c2.checkpoints[i];
        r.value = static_cast<double>(c2.min_envelope[i]);
        r.exact = std::to_string(c2.min_envelope[i]);
        r.limit = static_cast<double>(cfg.c2_threshold);
        r.label = "min_envelope";
        out.rows.push_back(std::move(r));
    }
    bool pass = c2.passes(cfg.c2_threshold);
    out.report = std::string("check-c2: envelope at n_max ") +
                 std::to_string(c2.min_envelope.back()) + (pass ? " > " : " <= ") +
                 std::to_string(cfg.c2_threshold) +
                 (pass ? " -> (C2) growth holds on the grid\n"
                       : " -> (C2) FAILS on the grid\n");
    return out;
}

RunResult run_mixing(const ExperimentConfig& cfg) {
    RunResult out;
    const auto& gen = *cfg.field;
    Rational exact_acc(0);
    bool all_exact = true;
    double acc = 0.0;
    for (std::size_t i = 0; i < cfg.shifts.size(); ++i) {
        CorrelationResult c =
            mixing_correlation(gen, *cfg.event_a, *cfg.event_b, cfg.basis, cfg.shifts[i],
                               cfg.mixing_samples, split_seed(gen.seed(), i));
        Row r;
        r.n = i;
        r.value = c.value;
        r.exact = exact_str(c.exact);
        r.std_error = c.std_error;
        r.label = "k=" + cfg.shifts[i].str();
        out.rows.push_back(std::move(r));
        acc += c.value;
        if (c.exact && all_exact)
            exact_acc += *c.exact;
        else
            all_exact = false;
    }
    Row avg;
    avg.n = cfg.shifts.size();
    avg.value = acc / static_cast<double>(cfg.shifts.size());
    if (all_exact) {
        Rational v = exact_acc / Rational(static_cast<std::int64_t>(cfg.shifts.size()));
        avg.exact = v.str();
        avg.value = v.to_double();
    }
    avg.label = "cesaro_average";
    out.rows.push_back(std::move(avg));
    out.report = "mixing: " + std::to_string(cfg.shifts.size()) +
                 " shift(s), cesaro_average=" + fmt_double(*out.rows.back().value) + "\n";
    return out;
}

RunResult run_uniform(const ExperimentConfig& cfg, unsigned threads) {
    LimitResolution lim = resolve_limit(cfg);
    if (!lim.verifiable)
        throw config_error("uniform: " + (lim.reason.empty() ? "no limit" : lim.reason));
    SkewSystem sys{*cfg.slope, *cfg.coupling, cfg.basis, *cfg.field};
    TGrid grid{cfg.t_points};
    ErrorCurve curve = uniform_error_curve(
        sys, *cfg.observable, grid, cfg.seeds, cfg.checkpoints,
        [&](const CirclePoint& t) { return lim.at(t).value; }, threads);

    RunResult out;
    for (std::size_t c = 0; c < curve.checkpoints.size(); ++c) {
        const char* names[3] = {"sup_error", "l1_error", "l2_error"};
        double vals[3] = {curve.sup_error[c], curve.l1_error[c], curve.l2_error[c]};
        for (int j = 0; j < 3; ++j) {
            Row r;
            r.n = curve.checkpoints[c];
            r.value = vals[j];
            r.label = names[j];
            out.rows.push_back(std::move(r));
        }
    }
    std::ostringstream rep;
    rep << "uniform: sup_error at n_max = " << fmt_double(curve.sup_error.back())
        << ", boundary_warnings=" << curve.boundary_warnings << "\n";
    out.report = rep.str();
    return out;
}

RunResult run_equicontinuity(const ExperimentConfig& cfg) {
    SkewSystem sys{*cfg.slope, *cfg.coupling, cfg.basis, *cfg.field};
    std::vector<ModulusEntry> table = equicontinuity_modulus(
        sys, *cfg.observable, cfg.deltas, cfg.n_list, cfg.seeds.front());
    RunResult out;
    for (const ModulusEntry& e : table) {
        Row r;
        r.n = e.n;
        r.value = e.modulus;
        r.label = "delta=" + fmt_double(e.delta) + ";arg=[" + fmt_double(e.arg_lo) + "," +
                  fmt_double(e.arg_hi) + "]";
        out.rows.push_back(std::move(r));
    }
    out.report = "equicontinuity: " + std::to_string(table.size()) + " (delta,n) cell(s)\n";
    return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    if (cfg.kind == "average") return run_average(cfg, threads);
    if (cfg.kind == "limits") return run_limits(cfg);
    if (cfg.kind == "check-growth") return run_check_growth(cfg);
    if (cfg.kind == "check-c2") return run_check_c2(cfg);
    if (cfg.kind == "mixing") return run_mixing(cfg);
    if (cfg.kind == "uniform") return run_uniform(cfg, threads);
    if (cfg.kind == "equicontinuity") return run_equicontinuity(cfg);
    throw config_error("run: unhandled kind '" + cfg.kind + "'");
}

RunResult run_sweep(const ExperimentConfig& cfg, unsigned threads) {
    if (cfg.sweep_axis.empty()) throw config_error("sweep: config has no sweep axis");
    RunResult out;
    std::ostringstream rep;
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        nlohmann::json sub = cfg.raw;
        sub.erase("sweep");
        const nlohmann::json& v = cfg.sweep_values[i];
        if (cfg.sweep_axis == "lambda") {
            sub["slope"] = v;
        } else if (cfg.sweep_axis == "t") {
            sub.erase("grid");
            sub["t"] = v;
        } else {
            sub["observable"]["m"] = v;
        }
        // per-axis-value seed stream, split from the shared master rule
        if (sub.contains("seeds") && sub["seeds"].is_object())
            sub["seeds"]["master"] =
                split_seed(sub["seeds"]["master"].get<std::uint64_t>(), i);
        ExperimentConfig sub_cfg = parse_config(sub);
        RunResult r = run_experiment(sub_cfg, threads);
        std::string axis_label = cfg.sweep_axis + "=" + v.dump();
        for (Row& row : r.rows) {
            row.label = row.label.empty() ? axis_label : axis_label + ";" + row.label;
            out.rows.push_back(std::move(row));
        }
        rep << "[" << axis_label << "] " << r.report;
    }
    out.report = rep.str();
    return out;
}

RunResult run_verify(const ExperimentConfig& cfg, unsigned threads,
                     std::optional<double> tolerance_override) {
    double tol = tolerance_override.value_or(cfg.tolerance);
    std::ostringstream rep;
    rep << "verify: kind=" << cfg.kind << " tolerance=" << fmt_double(tol) << "\n";
    RunResult out;

    if (cfg.kind == "check-c2") {
        out = run_check_c2(cfg);
        bool pass = out.rows.back().value > static_cast<double>(cfg.c2_threshold);
        rep << out.report << (pass ? "PASS\n" : "FAIL\n");
        out.report = rep.str();
        out.exit_code = pass ? 0 : 1;
        return out;
    }
    if (cfg.kind == "check-growth") {
        out = run_check_growth(cfg);
        bool pass = true;
        for (const Row& r : out.rows)
            if (r.error && *r.error > 0.0) pass = false;
        rep << out.report << (pass ? "PASS\n" : "FAIL\n");
        out.report = rep.str();
        out.exit_code = pass ? 0 : 1;
        return out;
    }
    if (cfg.kind == "mixing") {
        out = run_mixing(cfg);
        double avg = *out.rows.back().value;
        bool pass = avg <= tol;
        rep << out.report << "cesaro_average " << fmt_double(avg) << (pass ? " <= " : " > ")
            << fmt_double(tol) << " -> " << (pass ? "PASS\n" : "FAIL\n");
        out.report = rep.str();
        out.exit_code = pass ? 0 : 1;
        return out;
    }
    if (cfg.kind != "average" && cfg.kind != "uniform")
        throw config_error("verify: kind '" + cfg.kind + "' has no verification semantics");

    LimitResolution lim = resolve_limit(cfg);
    if (!lim.verifiable) {
        rep << "NOT VERIFIABLE: " << lim.reason << "\n";
        out.report = rep.str();
        out.exit_code = 2;
        return out;
    }

    std::vector<std::optional<LimitValue>> limit_at_t(cfg.t_points.size());
    for (std::size_t ti = 0; ti < cfg.t_points.size(); ++ti)
        limit_at_t[ti] = lim.at(cfg.t_points[ti]);

    std::vector<AverageSeries> series = run_orbits(cfg, threads);
    std::size_t ns = cfg.seeds.size();
    double max_err = 0.0;
    for (std::size_t ti = 0; ti < cfg.t_points.size(); ++ti)
        for (std::size_t si = 0; si < ns; ++si) {
            const AverageSeries& s = series[ti * ns + si];
            double err = std::fabs(s.last() - limit_at_t[ti]->value);
            max_err = std::max(max_err, err);
            Row r;
            r.n = cfg.checkpoints.back();
            r.t_index = ti;
            r.t = cfg.t_points[ti].value();
            r.seed_index = si;
            r.seed = cfg.seeds[si];
            r.value = s.last();
            r.exact = exact_str(s.last_exact());
            r.limit = limit_at_t[ti]->value;
            r.limit_exact = exact_str(limit_at_t[ti]->exact);
            r.error = err;
            r.formula = LimitValue::formula_name(limit_at_t[ti]->tag);
            out.rows.push_back(std::move(r));
        }

    const LimitValue& l0 = *limit_at_t.front();
    rep << "limit[" << LimitValue::formula_name(l0.tag) << "] = " << fmt_double(l0.value);
    if (l0.exact) rep << " (exact " << l0.exact->str() << ")";
    rep << "\nmax |A_n - limit| at n=" << cfg.checkpoints.back() << " over "
        << cfg.t_points.size() * ns << " orbit(s): " << fmt_double(max_err) << "\n";

    // for a checkerboard fibre over a periodic base the true per-phase limits
    // are exactly computable; report the gap the product formula misses
    if (cfg.field->kind() == FieldGenerator::Kind::phase_checkerboard &&
        cfg.slope->is_rational() &&
        cfg.observable->shape_rule() == WindowObservable::ShapeRule::staircase) {
        std::vector<LimitValue> phases = checkerboard_phase_limits(
            *cfg.field, cfg.observable->f(), *cfg.slope, cfg.t_points.front());
        rep << "exact per-phase limits:";
        double gap = std::numeric_limits<double>::infinity();
        std::string gap_exact;
        for (const LimitValue& pv : phases) {
            rep << " " << (pv.exact ? pv.exact->str() : fmt_double(pv.value));
            double g = std::fabs(pv.value - l0.value);
            if (g < gap) {
                gap = g;
                if (pv.exact && l0.exact) {
                    Rational d = *pv.exact - *l0.exact;
                    if (d < Rational(0)) d = -d;
                    gap_exact = d.str();
                }
            }
        }
        rep << "; gap to " << LimitValue::formula_name(l0.tag) << " limit = "
            << (gap_exact.empty() ? fmt_double(gap) : gap_exact) << "\n";
    }

    bool pass = max_err <= tol;
    rep << (pass ? "PASS\n" : "FAIL\n");
    out.report = rep.str();
    out.exit_code = pass ? 0 : 1;
    return out;
}

std::string render_csv(const nlohmann::json& raw_config, const std::vector<Row>& rows) {
    std::ostringstream os;
    os << "# skewlab " << kToolVersion << "\n";
    os << "# schema_version: " << kSchemaVersion << "\n";
    os << "# config_digest: " << config_digest(raw_config) << "\n";
    std::time_t now = std::time(nullptr);
    char ts[64];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated_at: " << ts << "\n";
    os << "# config: " << canonical_config(raw_config) << "\n";
    os << "n,t_index,t,seed_index,seed,value,exact,limit,limit_exact,error,formula,std_error,"
          "label\n";
    auto opt_u64 = [](const std::optional<std::uint64_t>& v) {
        return v ? std::to_string(*v) : std::string{};
    };
    auto opt_sz = [](const std::optional<std::size_t>& v) {
        return v ? std::to_string(*v) : std::string{};
    };
    auto opt_d = [](const std::optional<double>& v) {
        return v ? fmt_double(*v) : std::string{};
    };
    for (const Row& r : rows) {
        os << opt_u64(r.n) << ',' << opt_sz(r.t_index) << ',' << opt_d(r.t) << ','
           << opt_sz(r.seed_index) << ',' << opt_u64(r.seed) << ',' << opt_d(r.value) << ','
           << r.exact << ',' << opt_d(r.limit) << ',' << r.limit_exact << ','
           << opt_d(r.error) << ',' << r.formula << ',' << opt_d(r.std_error) << ','
           << r.label << '\n';
    }
    return os.str();
}

}  // namespace skewlab::cli
