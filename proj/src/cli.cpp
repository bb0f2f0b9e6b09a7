#include "qpmaps/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpmaps/classify.hpp"
#include "qpmaps/errors.hpp"
#include "qpmaps/io.hpp"
#include "qpmaps/jacobian.hpp"
#include "qpmaps/qp_map.hpp"
#include "qpmaps/random_map.hpp"
#include "qpmaps/reduce.hpp"
#include "qpmaps/transform.hpp"

namespace qpmaps {

namespace {

struct Globals {
    double tol_struct = kStructTol;
    double tol_num = kNumTol;
    std::uint64_t seed = 0;
    std::string out_path;
    bool force_json = false;
};

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct LoadedFile {
    std::string path;
    std::string digest;
    json parsed;
};

LoadedFile load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    LoadedFile f;
    f.path = path;
    f.digest = fnv1a64_hex(bytes);
    try {
        f.parsed = json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), path);
    }
    return f;
}

json input_info(const LoadedFile& f) {
    json j;
    j["path"] = f.path;
    j["digest"] = f.digest;
    return j;
}

json vector_to_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json dmatrix_to_json(const Matrix<double>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json smatrix_to_json(const Matrix<Scalar>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json classification_to_json(const ClassificationReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["orientation"] = to_string(rep.orientation);
    json hyps = json::array();
    for (const HypothesisCheck& h : rep.hypotheses) {
        json e;
        e["id"] = h.id;
        e["holds"] = h.holds;
        if (!h.detail.empty()) e["detail"] = h.detail;
        hyps.push_back(std::move(e));
    }
    j["hypotheses"] = std::move(hyps);
    json conds = json::array();
    for (const ConditionCheck& c : rep.conditions) {
        json e;
        e["id"] = c.id;
        e["holds"] = c.holds;
        e["witnesses"] = c.witnesses; // 0-based indices
        if (!c.detail.empty()) e["detail"] = c.detail;
        conds.push_back(std::move(e));
    }
    j["conditions"] = std::move(conds);
    j["note"] = rep.note;
    return j;
}

json oracle_to_json(const OracleResult& r, double threshold) {
    json j;
    j["verdict"] = r.verdict == OracleVerdict::NotConservative
                       ? "NotConservative"
                       : "ConsistentWithConservative";
    j["max_deviation"] = r.max_deviation;
    j["points"] = r.points;
    j["resampled"] = r.resampled;
    j["seed"] = r.seed;
    j["threshold"] = threshold;
    return j;
}

json canon_to_json(const CanonLog& log) {
    json notes = json::array();
    for (const std::string& n : log.notes) notes.push_back(n);
    return notes;
}

// Accepts "p/q", integers, finite decimals (exact), or anything stod
// accepts (stored as a double).
Scalar parse_param_scalar(const std::string& text) {
    static const std::regex rational(R"(^-?\d+(/\d+)?$)");
    static const std::regex decimal(R"(^(-?)(\d+)\.(\d+)$)");
    std::smatch m;
    if (std::regex_match(text, rational)) return Scalar::from_rational_string(text);
    if (std::regex_match(text, m, decimal)) {
        std::string digits = m[2].str() + m[3].str();
        std::string den = "1" + std::string(m[3].length(), '0');
        Scalar s = Scalar::from_rational_string(digits + "/" + den);
        return m[1].length() ? -s : s;
    }
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw InvalidParameter("bad parameter: '" + text + "'");
        return Scalar(v);
    } catch (const std::exception&) {
        throw InvalidParameter("bad parameter: '" + text + "'");
    }
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(pos));
            break;
        }
        parts.push_back(text.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return parts;
}

void emit(CliResult& res, const Globals& g, const std::string& payload) {
    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path, std::ios::binary);
        if (!out) throw FileError("cannot write " + g.out_path);
        out << payload;
        if (!out) throw FileError("cannot write " + g.out_path);
    } else {
        res.out = payload;
    }
}

void emit_json(CliResult& res, const Globals& g, const json& j) {
    emit(res, g, j.dump(2) + "\n");
}

int exit_code_for(Verdict v) {
    switch (v) {
        case Verdict::Conservative:
        case Verdict::NecessaryConditionsHold: return 0;
        case Verdict::NotConservative: return 1;
        case Verdict::Indeterminate: return 2;
    }
    return 2;
}

} // namespace

CliResult run_cli(std::vector<std::string> args) {
    CliResult res;
    Globals g;

    CLI::App app{"Quasipolynomial map toolkit: iterate, classify, transform, and "
                 "reduce maps x_i' = x_i exp(lambda_i + sum_j A_ij prod_k x_k^B_jk)."};
    app.name("qpmap");
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.add_option("--tol-struct", g.tol_struct,
                   "structural tolerance for float entries")
        ->capture_default_str();
    app.add_option("--tol-num", g.tol_num, "numerical comparison tolerance")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out", g.out_path, "write the primary output to FILE");
    app.add_flag("--json", g.force_json, "JSON output where CSV is the default");

    // validate
    std::string validate_path;
    CLI::App* cmd_validate = app.add_subcommand("validate", "check a map file");
    cmd_validate->add_option("map", validate_path, "map JSON file")->required();

    // classify
    std::string classify_path;
    bool classify_oracle = false;
    std::size_t classify_points = 200;
    double classify_threshold = 1e-6;
    CLI::App* cmd_classify = app.add_subcommand("classify", "conservativity verdict");
    cmd_classify->add_option("map", classify_path, "map JSON file")->required();
    cmd_classify->add_flag("--oracle", classify_oracle, "attach a sampled |det J| check");
    cmd_classify->add_option("--points", classify_points, "oracle sample count")
        ->capture_default_str();
    cmd_classify->add_option("--threshold", classify_threshold, "oracle deviation threshold")
        ->capture_default_str();

    // iterate
    std::string iterate_path, iterate_x0;
    std::size_t iterate_steps = 0;
    CLI::App* cmd_iterate = app.add_subcommand("iterate", "run a trajectory, CSV output");
    cmd_iterate->add_option("map", iterate_path, "map JSON file")->required();
    cmd_iterate->add_option("--x0", iterate_x0, "initial state x1,x2,...")->required();
    cmd_iterate->add_option("--steps", iterate_steps, "number of steps (>= 1)")->required();

    // jacobian
    std::string jac_path, jac_at;
    CLI::App* cmd_jacobian = app.add_subcommand("jacobian", "Jacobian at a state");
    cmd_jacobian->add_option("map", jac_path, "map JSON file")->required();
    cmd_jacobian->add_option("--at", jac_at, "evaluation state x1,x2,...")->required();

    // transform
    std::string trans_path, trans_qmt;
    CLI::App* cmd_transform = app.add_subcommand("transform", "apply a change of variables");
    cmd_transform->add_option("map", trans_path, "map JSON file")->required();
    cmd_transform->add_option("--qmt", trans_qmt, "transformation JSON file {\"C\": [[...]]}")
        ->required();

    // reduce
    std::string reduce_path, reduce_x0, reduce_qmt;
    CLI::App* cmd_reduce = app.add_subcommand(
        "reduce", "reduce to dimension n-1, or analyze a custom change of variables");
    cmd_reduce->add_option("map", reduce_path, "map JSON file")->required();
    cmd_reduce->add_option("--x0", reduce_x0, "initial state x1,x2,...")->required();
    cmd_reduce->add_option("--qmt", reduce_qmt, "optional transformation JSON file");

    // solve2d
    std::string solve_path, solve_x0;
    CLI::App* cmd_solve = app.add_subcommand("solve2d", "closed form of a conservative 2-d map");
    cmd_solve->add_option("map", solve_path, "map JSON file")->required();
    cmd_solve->add_option("--x0", solve_x0, "initial state x1,x2")->required();

    // integrals
    std::string integrals_path;
    CLI::App* cmd_integrals = app.add_subcommand("integrals", "quasimonomial first integrals");
    cmd_integrals->add_option("map", integrals_path, "map JSON file")->required();

    // oracle
    std::string oracle_path;
    std::size_t oracle_points = 200;
    double oracle_threshold = 1e-6;
    CLI::App* cmd_oracle = app.add_subcommand("oracle", "sampled |det J| spot check");
    cmd_oracle->add_option("map", oracle_path, "map JSON file")->required();
    cmd_oracle->add_option("--points", oracle_points, "sample count")->capture_default_str();
    cmd_oracle->add_option("--threshold", oracle_threshold, "deviation threshold")
        ->capture_default_str();

    // generate
    std::string gen_profile, gen_params, gen_range = "-1,1";
    std::size_t gen_n = 0, gen_m = 0, gen_s = 0;
    CLI::App* cmd_generate = app.add_subcommand("generate", "write a seeded map");
    cmd_generate
        ->add_option("--profile", gen_profile,
                     "unconstrained | conservative-2d | example1 | example2 | lv | "
                     "symplectic | trace-conservative")
        ->required();
    cmd_generate->add_option("--params", gen_params,
                             "exact parameters for example1 (l1,l2,a13) or example2 "
                             "(l1,l2,a13,a14,a24)");
    cmd_generate->add_option("--n", gen_n, "state dimension (0 = profile default)");
    cmd_generate->add_option("--m", gen_m, "quasimonomial count (0 = profile default)");
    cmd_generate->add_option("--s", gen_s, "symplectic pair count");
    cmd_generate->add_option("--range", gen_range, "entry range lo,hi")->capture_default_str();

    try {
        // CLI11's vector overload consumes arguments back to front.
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        std::vector<CLI::App*> subs = app.get_subcommands();
        res.out = subs.empty() ? app.help() : subs.back()->help();
        return res;
    } catch (const CLI::ParseError& e) {
        res.err = std::string(e.what()) + "\n";
        res.exit_code = 64;
        return res;
    }

    if (app.get_subcommands().empty()) {
        res.out = app.help();
        return res;
    }

    try {
        if (app.got_subcommand(cmd_validate)) {
            json j;
            j["command"] = "validate";
            try {
                LoadedFile f = load_file(validate_path);
                QPMap map = map_from_json(f.parsed, g.tol_struct);
                j["input"] = input_info(f);
                j["valid"] = true;
                j["n"] = map.n;
                j["m"] = map.m;
                j["exact"] = map.all_exact();
                j["lotka_volterra"] = is_lotka_volterra(map, g.tol_struct);
                j["summary"] = "valid";
                emit_json(res, g, j);
            } catch (const FileError&) {
                throw;
            } catch (const Error& e) {
                j["valid"] = false;
                json err;
                err["message"] = e.what();
                j["error"] = std::move(err);
                j["summary"] = "invalid";
                emit_json(res, g, j);
                res.exit_code = 1;
            }
        } else if (app.got_subcommand(cmd_classify)) {
            LoadedFile f = load_file(classify_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            ClassificationReport rep = classify_map(map, g.tol_struct);
            json j;
            j["command"] = "classify";
            j["input"] = input_info(f);
            json cls = classification_to_json(rep);
            for (auto& [k, v] : cls.items()) j[k] = v;
            if (classify_oracle) {
                OracleResult orc =
                    sampling_oracle(map, g.seed, classify_points, classify_threshold);
                j["oracle"] = oracle_to_json(orc, classify_threshold);
            }
            j["summary"] = to_string(rep.verdict);
            emit_json(res, g, j);
            res.exit_code = exit_code_for(rep.verdict);
        } else if (app.got_subcommand(cmd_iterate)) {
            LoadedFile f = load_file(iterate_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            if (iterate_steps == 0) throw InvalidParameter("--steps must be >= 1");
            State s0 = parse_state(iterate_x0, map.n);
            Trajectory tr = iterate(map, s0, iterate_steps);
            if (g.force_json) {
                json j;
                j["command"] = "iterate";
                j["input"] = input_info(f);
                j["steps"] = iterate_steps;
                json states = json::array();
                for (const State& s : tr.states) states.push_back(vector_to_json(s.x()));
                j["states"] = std::move(states);
                emit_json(res, g, j);
            } else {
                emit(res, g, trajectory_csv(tr));
            }
        } else if (app.got_subcommand(cmd_jacobian)) {
            LoadedFile f = load_file(jac_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            State s = parse_state(jac_at, map.n);
            JacobianEval ev = analytic_jacobian(map, s);
            json j;
            j["command"] = "jacobian";
            j["input"] = input_info(f);
            j["at"] = vector_to_json(s.x());
            j["J"] = dmatrix_to_json(ev.J);
            j["det"] = ev.det;
            j["K"] = dmatrix_to_json(ev.K);
            if (map.n == 3) {
                try {
                    DetExpansion3 ex = delta3_expansion(map, g.tol_struct);
                    json e;
                    e["lambda_sum"] = scalar_to_json(ex.lambda_sum);
                    json lin = json::array();
                    for (const Scalar& c : ex.linear) lin.push_back(scalar_to_json(c));
                    e["linear"] = std::move(lin);
                    json quad = json::array();
                    for (const auto& [k, l, c] : ex.quadratic) {
                        json q;
                        q["k"] = k;
                        q["l"] = l;
                        q["coeff"] = scalar_to_json(c);
                        quad.push_back(std::move(q));
                    }
                    e["quadratic"] = std::move(quad);
                    double value = evaluate_expansion(ex, map, s);
                    e["value_at"] = value;
                    e["consistent"] =
                        std::abs(value - ev.det) <= g.tol_num * (1.0 + std::abs(ev.det));
                    j["expansion"] = std::move(e);
                } catch (const ConditionsNotMet& e) {
                    j["expansion"] = nullptr;
                    j["expansion_note"] = e.what();
                }
            } else {
                j["expansion"] = nullptr;
            }
            j["summary"] = "det=" + format_double(ev.det);
            emit_json(res, g, j);
        } else if (app.got_subcommand(cmd_transform)) {
            LoadedFile fm = load_file(trans_path);
            QPMap map = map_from_json(fm.parsed, g.tol_struct);
            LoadedFile ft = load_file(trans_qmt);
            QMT t = qmt_from_json(ft.parsed, g.tol_struct);
            QPMap out = apply_qmt(map, t, g.tol_struct);
            emit_json(res, g, map_to_json(out));
        } else if (app.got_subcommand(cmd_reduce)) {
            LoadedFile f = load_file(reduce_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            State x0 = parse_state(reduce_x0, map.n);
            json j;
            j["command"] = "reduce";
            if (reduce_qmt.empty()) {
                Reduction red = reduce_conservative(map, x0, g.tol_struct);
                j["mode"] = "conservative";
                j["input"] = input_info(f);
                j["reduced_map"] = map_to_json(red.reduced);
                json lift;
                lift["C"] = smatrix_to_json(red.qmt.C());
                lift["constant_coordinate"] = red.constant_coordinate;
                lift["log_leaf"] = red.log_leaf;
                json exps = json::array();
                for (const Scalar& e : red.lift_exponents) exps.push_back(scalar_to_json(e));
                lift["exponents"] = std::move(exps);
                lift["x0"] = vector_to_json(x0.x());
                lift["reduced_x0"] = vector_to_json(red.reduced0.x());
                lift["canonicalization"] = canon_to_json(red.log);
                j["lift"] = std::move(lift);
                j["summary"] = "reduced n=" + std::to_string(map.n) + " to n=" +
                               std::to_string(red.reduced.n);
            } else {
                LoadedFile ft = load_file(reduce_qmt);
                QMT t = qmt_from_json(ft.parsed, g.tol_struct);
                QmtReduction qr = reduce_with_qmt(map, t, x0, g.tol_struct);
                j["mode"] = "qmt";
                json inputs;
                inputs["map"] = input_info(f);
                inputs["qmt"] = input_info(ft);
                j["inputs"] = std::move(inputs);
                j["transformed_map"] = map_to_json(qr.transformed);
                j["y0"] = vector_to_json(qr.y0.x());
                json coords = json::array();
                std::size_t nconst = 0, ngeom = 0;
                for (std::size_t i = 0; i < qr.coords.size(); ++i) {
                    const CoordStatus& c = qr.coords[i];
                    json e;
                    e["index"] = i;
                    switch (c.kind) {
                        case CoordKind::Constant:
                            e["kind"] = "constant";
                            e["value"] = std::exp(c.initial);
                            ++nconst;
                            break;
                        case CoordKind::Geometric:
                            e["kind"] = "geometric";
                            e["initial"] = std::exp(c.initial);
                            e["ratio"] = std::exp(c.log_ratio);
                            e["log_ratio"] = c.log_ratio;
                            ++ngeom;
                            break;
                        case CoordKind::Coupled: e["kind"] = "coupled"; break;
                    }
                    coords.push_back(std::move(e));
                }
                j["coordinates"] = std::move(coords);
                j["coupled"] = qr.coupled;
                j["canonicalization"] = canon_to_json(qr.log);
                j["summary"] = std::to_string(nconst) + " constant, " + std::to_string(ngeom) +
                               " geometric, " + std::to_string(qr.coupled.size()) + " coupled";
            }
            emit_json(res, g, j);
        } else if (app.got_subcommand(cmd_solve)) {
            LoadedFile f = load_file(solve_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            State x0 = parse_state(solve_x0, map.n);
            ClosedForm2D cf = solve_2d(map, x0, g.tol_struct);
            json j;
            j["command"] = "solve2d";
            j["input"] = input_info(f);
            j["x0"] = vector_to_json(x0.x());
            j["k"] = cf.k();
            j["log_k"] = cf.log_k;
            j["closed_form"] = "x1(t) = x1(0) * k^t, x2(t) = x2(0) * k^(-t), k = " +
                               format_double(cf.k());
            j["summary"] = "k=" + format_double(cf.k());
            emit_json(res, g, j);
        } else if (app.got_subcommand(cmd_integrals)) {
            LoadedFile f = load_file(integrals_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            IntegralBasis basis = find_integrals(map, g.tol_struct);
            json j;
            j["command"] = "integrals";
            j["input"] = input_info(f);
            json vecs = json::array();
            for (const std::vector<Scalar>& c : basis.exponents) {
                json v = json::array();
                for (const Scalar& s : c) v.push_back(scalar_to_json(s));
                vecs.push_back(std::move(v));
            }
            j["basis"] = std::move(vecs);
            j["count"] = basis.exponents.size();
            j["summary"] = std::to_string(basis.exponents.size()) + " integral(s)";
            emit_json(res, g, j);
        } else if (app.got_subcommand(cmd_oracle)) {
            LoadedFile f = load_file(oracle_path);
            QPMap map = map_from_json(f.parsed, g.tol_struct);
            OracleResult orc = sampling_oracle(map, g.seed, oracle_points, oracle_threshold);
            json j;
            j["command"] = "oracle";
            j["input"] = input_info(f);
            json body = oracle_to_json(orc, oracle_threshold);
            for (auto& [k, v] : body.items()) j[k] = v;
            j["summary"] = body["verdict"].get<std::string>();
            emit_json(res, g, j);
            res.exit_code = orc.verdict == OracleVerdict::NotConservative ? 1 : 0;
        } else if (app.got_subcommand(cmd_generate)) {
            QPMap map;
            Profile profile = parse_profile(gen_profile);
            if (gen_s != 0) {
                if (profile.kind != ProfileKind::Symplectic)
                    throw InvalidParameter("--s applies to the symplectic profile only");
                profile.s = gen_s;
            }
            if (!gen_params.empty()) {
                std::vector<std::string> parts = split_commas(gen_params);
                std::vector<Scalar> p;
                for (const std::string& t : parts) p.push_back(parse_param_scalar(t));
                if (profile.kind == ProfileKind::Example1Family) {
                    if (p.size() != 3)
                        throw InvalidParameter("example1 takes 3 parameters: l1,l2,a13");
                    map = make_example1(p[0], p[1], p[2]);
                } else if (profile.kind == ProfileKind::Example2Family) {
                    if (p.size() != 5)
                        throw InvalidParameter(
                            "example2 takes 5 parameters: l1,l2,a13,a14,a24");
                    map = make_example2(p[0], p[1], p[2], p[3], p[4]);
                } else {
                    throw InvalidParameter("--params applies to example profiles only");
                }
            } else {
                std::vector<std::string> parts = split_commas(gen_range);
                if (parts.size() != 2)
                    throw InvalidParameter("--range expects lo,hi");
                double lo = 0.0, hi = 0.0;
                try {
                    lo = std::stod(parts[0]);
                    hi = std::stod(parts[1]);
                } catch (const std::exception&) {
                    throw InvalidParameter("--range expects lo,hi");
                }
                map = random_map(g.seed, gen_n, gen_m, {lo, hi}, profile);
            }
            emit_json(res, g, map_to_json(map));
        }
    } catch (const FileError& e) {
        res.err = std::string("error: ") + e.what() + "\n";
        res.exit_code = 66;
        return res;
    } catch (const InvalidParameter& e) {
        res.err = std::string("error: ") + e.what() + "\n";
        res.exit_code = 64;
        return res;
    } catch (const Error& e) {
        json j;
        j["error"]["message"] = e.what();
        res.out = j.dump(2) + "\n";
        res.err = std::string("error: ") + e.what() + "\n";
        res.exit_code = 1;
        return res;
    }

    return res;
}

} // namespace qpmaps
