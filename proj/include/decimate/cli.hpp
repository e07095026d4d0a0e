#pragma once

// The `decimate` command line: subcommands over the library modules.

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "butterfly.hpp"
#include "decimation.hpp"
#include "io.hpp"
#include "measures.hpp"
#include "spectra.hpp"

namespace decimate::cli {

inline constexpr int kMaxLevel = 9;

/// "a/b" or an integer parses exactly; anything else as a decimal.
inline Frequency parse_number(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const auto a = std::stoll(s.substr(0, slash), &used);
            require(used == slash, "bad numerator in '" + s + "'");
            const auto rest = s.substr(slash + 1);
            const auto b = std::stoll(rest, &used);
            require(used == rest.size(), "bad denominator in '" + s + "'");
            require(b != 0, "zero denominator in '" + s + "'");
            return Rational(a, b);
        }
        if (s.find_first_of(".eE") == std::string::npos) {
            const auto a = std::stoll(s, &used);
            require(used == s.size(), "bad integer '" + s + "'");
            return Rational(a);
        }
        const double v = std::stod(s, &used);
        require(used == s.size() && std::isfinite(v), "bad number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw validation_error("not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        throw validation_error("number out of range: '" + s + "'");
    }
}

inline double as_double(const Frequency& f) {
    return std::holds_alternative<Rational>(f) ? std::get<Rational>(f).value() : std::get<double>(f);
}

inline double parse_real(const std::string& s) { return as_double(parse_number(s)); }

/// alpha = k/3^n reduced to [0,1) with n >= 1, if alpha is an exact triadic rational.
inline std::optional<std::pair<std::int64_t, int>> triadic_pair(const Frequency& alpha) {
    if (!std::holds_alternative<Rational>(alpha)) return std::nullopt;
    const auto& r = std::get<Rational>(alpha);
    const int e = triadic_exponent(r.den());
    if (e < 0) return std::nullopt;
    const int n = std::max(1, e);
    const std::int64_t den = pow3(n);
    const std::int64_t k = ((r.num() * (den / r.den())) % den + den) % den;
    return std::pair{k, n};
}

inline std::string triadic_label(const Rational& r) {
    const int e = triadic_exponent(r.den());
    if (e < 0) return r.str();
    return std::to_string(r.num()) + "/3^" + std::to_string(e);
}

inline BoundaryCondition parse_bc(const std::string& s) {
    if (s == "neumann") return BoundaryCondition::Neumann;
    if (s == "dirichlet") return BoundaryCondition::Dirichlet;
    throw validation_error("boundary must be neumann or dirichlet");
}

struct Common {
    std::string p = "1/3";
    std::string beta = "1";
    std::string alpha;
    std::string theta = "0";
    int level = 1;
    std::string method = "auto";
    std::string format = "csv";
    std::string boundary = "neumann";
    std::string output;
    bool verify = false;
};

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open output file '" + path + "'");
    f << text;
}

inline void check_format(const std::string& f, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (f == a) return;
    throw validation_error("unsupported --format '" + f + "'");
}

inline std::string spectrum_csv(const SpectrumSet& s) {
    std::string out = "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.size(); ++i) out += std::to_string(i) + "," + format_double(s.values[i]) + "\n";
    return out;
}

inline std::string spectrum_json(const SpectrumSet& s, const std::string& method, nlohmann::json params) {
    nlohmann::json j;
    j["parameters"] = std::move(params);
    j["method"] = method;
    j["count"] = s.size();
    j["eigenvalues"] = s.values;
    return dump_json(j);
}

/// Runs the spectrum computation, optionally cross-checked against the oracle.
template <class F>
SpectrumSet checked(F&& compute, Method method, bool verify, std::ostream& err) {
    auto s = compute(method);
    if (verify) {
        const auto other = compute(method == Method::Decimation ? Method::Direct : Method::Decimation);
        const double h = hausdorff(s, other);
        err << "verify: hausdorff(decimation, direct) = " << format_double(h) << "\n";
        if (!(h <= 1e-8)) throw numerical_error("decimation and direct spectra disagree: hausdorff " + format_double(h));
    }
    return s;
}

inline Method parse_method(const std::string& m, bool decimation_possible) {
    if (m == "direct") return Method::Direct;
    if (m == "decimation") {
        require(decimation_possible,
                "decimation needs a Neumann operator, theta = 0 and a rational alpha with denominator 3^n");
        return Method::Decimation;
    }
    if (m == "auto") return decimation_possible ? Method::Decimation : Method::Direct;
    throw validation_error("method must be auto, decimation or direct");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral decimation for self-similar Laplacians and almost Mathieu operators", "decimate"};
    app.require_subcommand(1);
    Common c;

    const auto add_p = [&](CLI::App* s) { s->add_option("--p", c.p, "hop probability in (0,1), a/b or decimal"); };
    const auto add_amo = [&](CLI::App* s, bool need_alpha) {
        s->add_option("--beta", c.beta, "potential strength");
        auto* a = s->add_option("--alpha", c.alpha, "frequency; k/3^n enables decimation");
        if (need_alpha) a->required();
        s->add_option("--theta", c.theta, "phase");
    };
    const auto add_out = [&](CLI::App* s) { s->add_option("-o,--output", c.output, "output file (default stdout)"); };

    auto* lap = app.add_subcommand("laplacian-spectrum", "spectrum of the level-l p-Laplacian");
    add_p(lap);
    lap->add_option("--level", c.level, "level l");
    lap->add_option("--method", c.method, "auto | decimation | direct");
    lap->add_option("--boundary", c.boundary, "neumann | dirichlet");
    lap->add_flag("--verify", c.verify, "cross-check against the other method");
    lap->add_option("--format", c.format, "csv | json");
    add_out(lap);

    auto* amo = app.add_subcommand("amo-spectrum", "spectrum of the level-l almost Mathieu operator");
    add_p(amo);
    add_amo(amo, true);
    amo->add_option("--level", c.level, "level l");
    amo->add_option("--method", c.method, "auto | decimation | direct");
    amo->add_option("--boundary", c.boundary, "neumann | dirichlet");
    amo->add_flag("--verify", c.verify, "cross-check against the other method");
    amo->add_option("--format", c.format, "csv | json");
    add_out(amo);

    auto* poly = app.add_subcommand("decimation-poly", "spectral decimation polynomial and exceptional set");
    add_p(poly);
    add_amo(poly, false);
    add_out(poly);

    double ids_from = -1.0, ids_to = 3.0;
    int ids_points = 101;
    auto* idsc = app.add_subcommand("ids", "integrated density of states on a grid");
    add_p(idsc);
    add_amo(idsc, false);
    idsc->add_option("--level", c.level, "level l");
    idsc->add_option("--from", ids_from, "grid start");
    idsc->add_option("--to", ids_to, "grid end");
    idsc->add_option("--points", ids_points, "grid size");
    idsc->add_option("--format", c.format, "csv | json");
    add_out(idsc);

    double min_width = 1e-3;
    int i_max = 4;
    bool no_confirm = false;
    auto* gapc = app.add_subcommand("gaps", "spectral gaps with IDS labels");
    add_p(gapc);
    add_amo(gapc, false);
    gapc->add_option("--level", c.level, "level l");
    gapc->add_option("--min-width", min_width, "smallest reported gap");
    gapc->add_option("--i-max", i_max, "depth of the label grid");
    gapc->add_flag("--no-confirm", no_confirm, "skip confirmation at level l+1");
    gapc->add_option("--format", c.format, "csv | json");
    add_out(gapc);

    std::size_t alpha_count = 200;
    int triadic = 0;
    std::string svg_path, sweep = "alpha", beta_from = "0", beta_to = "3";
    auto* bfly = app.add_subcommand("butterfly", "eigenvalues over a grid of alphas (or betas)");
    add_p(bfly);
    add_amo(bfly, false);
    int bfly_level = 5;
    bfly->add_option("--level", bfly_level, "level l");
    bfly->add_option("--count", alpha_count, "grid size");
    bfly->add_option("--triadic", triadic, "use the triadic grid k/3^n, n <= value, instead of a uniform one");
    bfly->add_option("--sweep", sweep, "alpha | beta");
    bfly->add_option("--beta-from", beta_from, "beta sweep start");
    bfly->add_option("--beta-to", beta_to, "beta sweep end");
    bfly->add_option("--svg", svg_path, "also write a scatter plot");
    add_out(bfly);

    int depth = 6;
    std::string mode = "full";
    std::uint64_t seed = 0;
    auto* jul = app.add_subcommand("julia", "backward orbit of 2 under the Laplacian decimation map");
    add_p(jul);
    jul->add_option("--depth", depth, "tree depth or number of stochastic points");
    jul->add_option("--mode", mode, "full | stochastic");
    jul->add_option("--seed", seed, "seed for stochastic mode");
    jul->add_option("--format", c.format, "csv | json");
    add_out(jul);

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const double p = parse_real(c.p);
        check_probability(p);
        const double beta = parse_real(c.beta);
        const double theta = parse_real(c.theta);

        if (*lap) {
            check_format(c.format, {"csv", "json"});
            require(c.level >= 0 && c.level <= kMaxLevel, "level must lie in [0, 9]");
            const auto bc = parse_bc(c.boundary);
            const auto method = parse_method(c.method, bc == BoundaryCondition::Neumann);
            const auto s = checked(
                [&](Method m) {
                    return m == Method::Direct ? eigenvalues(build_laplacian(p, c.level, bc))
                                               : laplacian_spectrum(p, c.level, Method::Decimation);
                },
                method, c.verify && bc == BoundaryCondition::Neumann, err);
            const std::string name = method == Method::Direct ? "direct" : "decimation";
            write_output(c.output,
                         c.format == "csv" ? spectrum_csv(s)
                                           : spectrum_json(s, name, {{"p", p}, {"level", c.level}, {"boundary", c.boundary}}),
                         out);
            return 0;
        }

        if (*amo) {
            check_format(c.format, {"csv", "json"});
            require(c.level >= 0 && c.level <= kMaxLevel, "level must lie in [0, 9]");
            const auto alpha = parse_number(c.alpha);
            const auto bc = parse_bc(c.boundary);
            const auto tri = triadic_pair(alpha);
            const bool possible = tri && theta == 0.0 && bc == BoundaryCondition::Neumann && c.level >= tri->second;
            const auto method = parse_method(c.method, possible);
            const auto s = checked(
                [&](Method m) {
                    if (m == Method::Direct) return eigenvalues(build_amo(p, beta, alpha, theta, c.level, bc));
                    return amo_spectrum(p, beta, tri->first, tri->second, c.level, Method::Decimation);
                },
                method, c.verify && possible, err);
            const std::string name = method == Method::Direct ? "direct" : "decimation";
            nlohmann::json params{{"p", p}, {"beta", beta}, {"theta", theta}, {"level", c.level}, {"boundary", c.boundary}};
            params["alpha"] = std::holds_alternative<Rational>(alpha) ? nlohmann::json(std::get<Rational>(alpha).str())
                                                                      : nlohmann::json(std::get<double>(alpha));
            write_output(c.output, c.format == "csv" ? spectrum_csv(s) : spectrum_json(s, name, params), out);
            return 0;
        }

        if (*poly) {
            const auto data = [&] {
                if (c.alpha.empty()) return laplacian_decimation(p);
                const auto tri = triadic_pair(parse_number(c.alpha));
                require(tri.has_value(), "decimation-poly needs alpha = k/3^n");
                return amo_decimation(p, beta, tri->first, tri->second);
            }();
            nlohmann::json j;
            j["n"] = data.n();
            j["coeffs"] = data.R().coeffs();
            j["exceptional"] = data.exceptional().values;
            j["phi_scale"] = data.phi_scale();
            j["branches_real"] = data.branches_real();
            write_output(c.output, dump_json(j), out);
            return 0;
        }

        const auto level_operator = [&](int level) {
            require(level >= 0 && level <= kMaxLevel + 1, "level must lie in [0, 9]");
            if (c.alpha.empty()) return symmetrize(build_laplacian(p, level, BoundaryCondition::Neumann));
            return symmetrize(build_amo(p, beta, parse_number(c.alpha), theta, level, BoundaryCondition::Neumann));
        };

        if (*idsc) {
            check_format(c.format, {"csv", "json"});
            require(c.level <= kMaxLevel, "level must lie in [0, 9]");
            require(ids_points >= 2 && ids_points <= 1000000, "points must lie in [2, 10^6]");
            require(ids_to > ids_from, "--to must exceed --from");
            const auto s = level_operator(c.level);
            std::vector<double> xs(static_cast<std::size_t>(ids_points)), ns(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xs[i] = ids_from + (ids_to - ids_from) * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
                ns[i] = ids_fast(s, xs[i]);
            }
            if (c.format == "csv") {
                std::string text = "x,N\n";
                for (std::size_t i = 0; i < xs.size(); ++i) text += format_double(xs[i]) + "," + format_double(ns[i]) + "\n";
                write_output(c.output, text, out);
            } else {
                write_output(c.output, dump_json({{"x", xs}, {"N", ns}}), out);
            }
            return 0;
        }

        if (*gapc) {
            check_format(c.format, {"csv", "json"});
            require(c.level >= 1 && c.level <= kMaxLevel, "level must lie in [1, 9]");
            const auto s = level_operator(c.level);
            std::optional<SymmetricTridiagonal> confirm;
            if (!no_confirm) confirm = level_operator(c.level + 1);
            const auto gaps = detect_gaps(eigenvalues(s), min_width, confirm);
            int n = 1;
            if (!c.alpha.empty())
                if (const auto tri = triadic_pair(parse_number(c.alpha))) n = tri->second;
            const auto grid = gap_labels_grid(n, i_max);
            if (c.format == "csv") {
                std::string text = "lo,hi,label\n";
                for (const auto& g : gaps)
                    text += format_double(g.lo) + "," + format_double(g.hi) + "," + format_double(g.label) + "\n";
                write_output(c.output, text, out);
            } else {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& g : gaps) {
                    const auto [dist, r] = nearest_label(grid, g.label);
                    arr.push_back({{"lo", g.lo},
                                   {"hi", g.hi},
                                   {"label", g.label},
                                   {"exact_label", triadic_label(r)},
                                   {"label_distance", dist}});
                }
                write_output(c.output, dump_json({{"gaps", arr}}), out);
            }
            return 0;
        }

        if (*bfly) {
            require(bfly_level >= 0 && bfly_level <= kMaxLevel, "level must lie in [0, 9]");
            std::vector<SweepRecord> recs;
            std::string column;
            if (sweep == "alpha") {
                column = "alpha";
                if (triadic > 0) {
                    const auto a = triadic_alphas(triadic);
                    recs = sweep_alpha(p, beta, theta, bfly_level, std::vector<Frequency>(a.begin(), a.end()));
                } else {
                    require(alpha_count >= 1 && alpha_count <= 100000, "count must lie in [1, 10^5]");
                    recs = sweep_alpha(p, beta, theta, bfly_level, uniform_alphas(alpha_count));
                }
            } else if (sweep == "beta") {
                column = "beta";
                require(!c.alpha.empty(), "a beta sweep needs --alpha");
                require(alpha_count >= 1 && alpha_count <= 100000, "count must lie in [1, 10^5]");
                const double b0 = parse_real(beta_from), b1 = parse_real(beta_to);
                std::vector<double> betas(alpha_count, b0);
                for (std::size_t i = 1; i < alpha_count; ++i)
                    betas[i] = b0 + (b1 - b0) * static_cast<double>(i) / static_cast<double>(alpha_count - 1);
                recs = sweep_beta(p, parse_number(c.alpha), theta, bfly_level, betas);
            } else {
                throw validation_error("sweep must be alpha or beta");
            }
            std::string text = column + ",eigenvalue\n";
            std::vector<SvgPoint> pts;
            for (const auto& r : recs)
                for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
                    for (int m = 0; m < r.eigenvalues.multiplicities[i]; ++m) {
                        text += format_double(r.parameter) + "," + format_double(r.eigenvalues.values[i]) + "\n";
                        pts.push_back({r.eigenvalues.values[i], r.parameter});
                    }
            write_output(c.output, text, out);
            if (!svg_path.empty()) write_output(svg_path, svg_scatter(pts, "eigenvalue", column), out);
            return 0;
        }

        if (*jul) {
            check_format(c.format, {"csv", "json"});
            JuliaMode m;
            if (mode == "full")
                m = JuliaMode::FullTree;
            else if (mode == "stochastic")
                m = JuliaMode::Stochastic;
            else
                throw validation_error("mode must be full or stochastic");
            if (m == JuliaMode::Stochastic) require(depth <= 10000000, "stochastic depth is capped at 10^7");
            const auto j = julia_points(p, depth, m, seed);
            if (c.format == "csv") {
                std::string text = "index,point\n";
                for (std::size_t i = 0; i < j.points.size(); ++i)
                    text += std::to_string(i) + "," + format_double(j.points[i]) + "\n";
                write_output(c.output, text, out);
            } else {
                write_output(c.output,
                             dump_json({{"p", p}, {"depth", depth}, {"mode", mode}, {"seed", seed}, {"points", j.points}}),
                             out);
            }
            return 0;
        }

        if (*ver) {
            bool all = true;
            out << std::left << std::setw(4) << "id" << std::setw(6) << "ok" << std::setw(10) << "seconds"
                << "check\n";
            for (const auto& r : acceptance::run_all()) {
                all = all && r.pass;
                std::ostringstream secs;
                secs << std::fixed << std::setprecision(3) << r.seconds;
                out << std::setw(4) << r.id << std::setw(6) << (r.pass ? "PASS" : "FAIL") << std::setw(10)
                    << secs.str() << r.name << "\n" << std::setw(20) << "" << r.detail << "\n";
            }
            return all ? 0 : 1;
        }
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace decimate::cli
