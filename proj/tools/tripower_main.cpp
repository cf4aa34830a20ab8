// tripower: Hecke eigenvalue tables, quaternary representation counts, and
// square-free power-moment sums, with verification suites and Euler-product
// evaluations.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tripower/arith.hpp"
#include "tripower/common.hpp"
#include "tripower/dirichlet.hpp"
#include "tripower/eigenform.hpp"
#include "tripower/lattice.hpp"
#include "tripower/moments.hpp"
#include "tripower/sympow.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tripower;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceLimit = 3;

struct RunConfig {
    int weight = 12;
    std::int64_t limit = 100000;  // coefficient/table limit
    std::int64_t prime_bound = 10000;
    std::int64_t x_min = 1000;
    std::int64_t x_max = 100000;
    int per_decade = 8;
    int r = 2;
    std::string method = "sieve";
    std::string poly = "alpha";
    std::string out = "csv";
    std::string cache_dir;
    std::string out_dir = ".";
    int threads = 0;
    std::string target;  // verify subcommand
};

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << content;
}

arith::MultiplicativeTables load_tables(const RunConfig& cfg, std::int64_t limit) {
    if (!cfg.cache_dir.empty()) {
        fs::create_directories(cfg.cache_dir);
        const fs::path file = fs::path(cfg.cache_dir) / ("tables_" + std::to_string(limit) + ".bin");
        if (fs::exists(file)) {
            if (auto cached = arith::read_cache(file, limit)) return std::move(*cached);
            std::cerr << "warning: table cache " << file.string()
                      << " has a stale format; rebuilding\n";
        }
        auto t = arith::build_tables(limit);
        arith::write_cache(t, file);
        return t;
    }
    return arith::build_tables(limit);
}

eigenform::EigenformTable load_form(const RunConfig& cfg, int weight, std::int64_t limit) {
    eigenform::BuildOptions opt;
    opt.threads = cfg.threads;
    if (!cfg.cache_dir.empty()) {
        fs::create_directories(cfg.cache_dir);
        const fs::path file = fs::path(cfg.cache_dir) / ("eigenform_w" + std::to_string(weight) +
                                                         "_" + std::to_string(limit) + ".bin");
        if (fs::exists(file)) {
            if (auto cached = eigenform::read_cache(file, weight, limit)) return std::move(*cached);
            std::cerr << "warning: coefficient cache " << file.string()
                      << " has a stale format; rebuilding\n";
        }
        auto t = eigenform::eigenform_coefficients(weight, limit, opt);
        eigenform::write_cache(t, file);
        return t;
    }
    return eigenform::eigenform_coefficients(weight, limit, opt);
}

bool verify_hecke_range(const eigenform::EigenformTable& form, std::int64_t product_cap,
                        std::string* message) {
    for (std::int64_t m = 1; m * m <= product_cap; ++m) {
        for (std::int64_t n = m; m * n <= product_cap; ++n) {
            if (!eigenform::verify_hecke(form, m, n)) {
                *message = "hecke relation failed at (m, n) = (" + std::to_string(m) + ", " +
                           std::to_string(n) + ")";
                return false;
            }
        }
    }
    *message = "hecke: ok for all m*n <= " + std::to_string(product_cap);
    return true;
}

bool verify_deligne_range(const eigenform::EigenformTable& form,
                          const arith::MultiplicativeTables& tables, std::int64_t limit,
                          int threads, std::string* message) {
    const auto violation = eigenform::verify_deligne(form, tables, limit, threads);
    if (violation) {
        *message = "deligne bound failed at n = " + std::to_string(violation->n) +
                   " (lambda = " + format_double(violation->lambda) +
                   ", d = " + std::to_string(violation->divisors) + ")";
        return false;
    }
    *message = "deligne: ok for all n <= " + std::to_string(limit);
    return true;
}

bool verify_chebyshev_range(const eigenform::EigenformTable& form,
                            const arith::MultiplicativeTables& tables, std::int64_t prime_cap,
                            int r_cap, std::string* message) {
    for (std::int64_t p : tables.primes) {
        if (p > prime_cap) break;
        const auto s =
            sympow::SatakeLocal::from_lambda(p, form.lambda[static_cast<std::size_t>(p)]);
        for (int r = 1; r <= r_cap; ++r) {
            double direct = 1.0;
            for (int k = 0; k < r; ++k) direct *= s.lambda_p;
            const double decomposed = sympow::power_decomposition(r, s);
            if (std::fabs(direct - decomposed) > 1e-8 * std::max(1.0, std::fabs(direct))) {
                *message = "power decomposition failed at p = " + std::to_string(p) +
                           ", r = " + std::to_string(r);
                return false;
            }
        }
    }
    *message = "chebyshev: ok for primes <= " + std::to_string(prime_cap) + ", r <= " +
               std::to_string(r_cap);
    return true;
}

int cmd_eigenvalues(const RunConfig& cfg) {
    const auto form = load_form(cfg, cfg.weight, cfg.limit);
    const auto tables = load_tables(cfg, cfg.limit);
    fs::create_directories(cfg.out_dir);

    if (cfg.out == "json") {
        json doc;
        doc["command"] = "eigenvalues";
        doc["timestamp"] = now_utc();
        doc["weight"] = form.weight;
        doc["limit"] = form.limit;
        json rows = json::array();
        for (std::int64_t n = 1; n <= form.limit; ++n)
            rows.push_back({{"n", n},
                            {"a", form.a[static_cast<std::size_t>(n)].get_str()},
                            {"lambda", form.lambda[static_cast<std::size_t>(n)]}});
        doc["coefficients"] = std::move(rows);
        const fs::path file =
            fs::path(cfg.out_dir) / ("eigenvalues_w" + std::to_string(cfg.weight) + ".json");
        write_text_file(file, doc.dump(2) + "\n");
        std::cout << "wrote " << file.string() << "\n";
    } else {
        std::ostringstream os;
        eigenform::write_csv(form, os);
        const fs::path file =
            fs::path(cfg.out_dir) / ("eigenvalues_w" + std::to_string(cfg.weight) + ".csv");
        write_text_file(file, os.str());
        std::cout << "wrote " << file.string() << "\n";
    }

    std::string msg;
    bool ok = verify_hecke_range(form, std::min<std::int64_t>(cfg.limit, 10000), &msg);
    std::cout << msg << "\n";
    if (ok) {
        ok = verify_deligne_range(form, tables, cfg.limit, cfg.threads, &msg);
        std::cout << msg << "\n";
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const RunConfig& cfg) {
    std::string msg;
    bool ok = false;
    if (cfg.target == "hecke") {
        const auto form = load_form(cfg, cfg.weight, cfg.limit);
        ok = verify_hecke_range(form, std::min<std::int64_t>(cfg.limit, 10000), &msg);
    } else if (cfg.target == "deligne") {
        const auto form = load_form(cfg, cfg.weight, cfg.limit);
        const auto tables = load_tables(cfg, cfg.limit);
        ok = verify_deligne_range(form, tables, cfg.limit, cfg.threads, &msg);
    } else if (cfg.target == "chebyshev") {
        const std::int64_t cap = std::min<std::int64_t>(cfg.limit, 1000);
        const auto form = load_form(cfg, cfg.weight, std::max<std::int64_t>(cap, 2));
        const auto tables = load_tables(cfg, std::max<std::int64_t>(cap, 2));
        ok = verify_chebyshev_range(form, tables, cap, 10, &msg);
    } else if (cfg.target == "repidentity") {
        const std::int64_t limit = cfg.limit;
        const auto tables = load_tables(cfg, limit + 1);
        const auto spec = lattice::PolynomialSpec::make(lattice::parse_poly_kind(cfg.poly));
        const auto rep = lattice::rep_counts(spec, limit);
        const auto res = lattice::verify_rep_identity(rep, tables);
        fs::create_directories(cfg.out_dir);
        std::ostringstream os;
        lattice::write_csv(rep, tables, os);
        const fs::path file = fs::path(cfg.out_dir) / ("lattice_" + cfg.poly + ".csv");
        write_text_file(file, os.str());
        if (res.ok) {
            std::string c = std::to_string(res.c_num);
            if (res.c_den != 1) c += "/" + std::to_string(res.c_den);
            msg = cfg.poly + ": c = " + c + ", 0 inconsistencies (n <= " +
                  std::to_string(limit + 1) + "); wrote " + file.string();
            ok = true;
        } else {
            msg = cfg.poly + ": inconsistency at n = " + std::to_string(res.failure->n) +
                  " (count = " + std::to_string(res.failure->count) +
                  ", sigma = " + std::to_string(res.failure->sigma) + ")";
        }
    }
    std::cout << msg << "\n";
    return ok ? kExitOk : kExitVerifyFailed;
}

json growth_json(const moments::MomentSeries& series, std::int64_t lo, std::int64_t hi) {
    const auto fit = moments::growth_exponent(series, lo, hi);
    return json{{"slope", fit.slope},
                {"slope_stderr", fit.slope_stderr},
                {"points", fit.points},
                {"window", {lo, hi}}};
}

int cmd_moments(const RunConfig& cfg) {
    if (cfg.r < 1) throw std::invalid_argument("moments: r must be >= 1");
    if (cfg.limit < cfg.x_max)
        throw std::invalid_argument("moments: coefficient limit must cover x_max");
    const auto method = moments::parse_method(cfg.method);
    const auto xs = moments::checkpoint_schedule(cfg.x_min, cfg.x_max, cfg.per_decade);
    const auto tables = load_tables(cfg, cfg.limit);
    const auto form = load_form(cfg, cfg.weight, cfg.limit);

    moments::MomentSeries series;
    if (method == moments::Method::sieve) {
        series = moments::compute_series_sieve(cfg.r, xs, tables, form, cfg.threads);
    } else {
        const auto spec = lattice::PolynomialSpec::make(lattice::parse_poly_kind(cfg.poly));
        series = moments::compute_series_lattice(cfg.r, xs, spec, tables, form);
    }

    fs::create_directories(cfg.out_dir);
    const std::string stem = "moments_r" + std::to_string(cfg.r) + "_" + cfg.method;
    {
        std::ostringstream os;
        moments::write_csv(series, os);
        write_text_file(fs::path(cfg.out_dir) / (stem + ".csv"), os.str());
    }

    json doc;
    doc["command"] = "moments";
    doc["timestamp"] = now_utc();
    doc["weight"] = cfg.weight;
    doc["r"] = cfg.r;
    doc["method"] = cfg.method;
    doc["normalization"] = series.normalization;
    doc["checkpoints"] = json::array();
    for (const auto& [x, s] : series.checkpoints) doc["checkpoints"].push_back({x, s});

    const std::int64_t hi = cfg.x_max;
    const std::int64_t lo = std::max<std::int64_t>(cfg.x_min, hi / 100);
    try {
        doc["growth"] = growth_json(series, lo, hi);
    } catch (const std::invalid_argument& e) {
        doc["growth"] = {{"error", e.what()}};
    }
    if (cfg.r % 2 == 0) {
        try {
            const auto fit = moments::fit_main_term(series, hi / 10, hi);
            const auto prev = moments::fit_main_term(series, hi / 100, hi / 10);
            doc["main_term"] = {{"c_hat", fit.c_hat},
                                {"c_stderr", fit.c_stderr},
                                {"residual_slope", fit.residual_slope},
                                {"points", fit.points},
                                {"window", {hi / 10, hi}},
                                {"c_hat_previous_decade", prev.c_hat}};
        } catch (const std::invalid_argument& e) {
            doc["main_term"] = {{"error", e.what()}};
        }
    } else {
        doc["main_term"] = nullptr;
        doc["note"] = "no main term (odd r)";
    }
    if (cfg.r >= 3) {
        const auto pred = moments::predicted_exponents(cfg.r);
        json p{{"gamma_r", pred.gamma_r},
               {"error_exponent", pred.error_exponent},
               {"gamma_negative", pred.gamma_negative}};
        if (pred.d_r)
            p["d_r"] = *pred.d_r;
        else
            p["d_r"] = nullptr;
        if (!std::isnan(pred.d_r_formula)) p["d_r_formula"] = pred.d_r_formula;
        doc["prediction"] = std::move(p);
    }
    write_text_file(fs::path(cfg.out_dir) / (stem + ".json"), doc.dump(2) + "\n");
    std::cout << "wrote " << (fs::path(cfg.out_dir) / (stem + ".csv")).string() << " and "
              << (fs::path(cfg.out_dir) / (stem + ".json")).string() << "\n";
    return kExitOk;
}

json euler_json(const char* kind, double s, const dirichlet::EulerValue& v, int weight) {
    return json{{"kind", kind},
                {"s", s},
                {"prime_bound", v.prime_bound},
                {"value", v.value},
                {"tail_bound", v.tail_bound},
                {"tail_heuristic", v.tail_heuristic},
                {"weight", weight}};
}

int cmd_constant(const RunConfig& cfg) {
    if (cfg.prime_bound < 100)
        throw std::invalid_argument("constant: prime bound must be >= 100");
    const std::int64_t table_limit = std::max({cfg.limit, cfg.prime_bound, std::int64_t(1000000)});
    const auto tables = load_tables(cfg, table_limit);
    const auto form = load_form(cfg, cfg.weight, table_limit);
    const auto c = dirichlet::constant_C(cfg.prime_bound, tables, form, 0, cfg.threads);

    json doc;
    doc["command"] = "constant";
    doc["timestamp"] = now_utc();
    doc["weight"] = cfg.weight;
    doc["prime_bound"] = cfg.prime_bound;
    doc["factors"] = json::array({
        euler_json("l_chi8_at_2", 2.0, c.l2_chi8, cfg.weight),
        euler_json("sym2_at_1", 1.0, c.l1_sym2, cfg.weight),
        euler_json("sym2_twisted_at_2", 2.0, c.l2_sym2_chi8, cfg.weight),
        euler_json("u2_at_2", 2.0, c.u2, cfg.weight),
    });
    doc["C"] = {{"value", c.total.value},
                {"tail_bound", c.total.tail_bound},
                {"tail_heuristic", c.total.tail_heuristic}};
    doc["C_half"] = c.total.value / 2.0;

    fs::create_directories(cfg.out_dir);
    const fs::path file = fs::path(cfg.out_dir) / "constant.json";
    write_text_file(file, doc.dump(2) + "\n");
    std::cout << "C = " << format_double(c.total.value)
              << " (tail log bound " << format_double(c.total.tail_bound)
              << "), C/2 = " << format_double(c.total.value / 2.0) << "\n"
              << "wrote " << file.string() << "\n";
    return kExitOk;
}

int cmd_report(const RunConfig& cfg) {
    json doc;
    doc["command"] = "report";
    doc["timestamp"] = now_utc();
    json docs = json::object();
    std::vector<fs::path> files;
    if (fs::exists(cfg.out_dir))
        for (const auto& entry : fs::directory_iterator(cfg.out_dir))
            if (entry.path().extension() == ".json" && entry.path().filename() != "report.json")
                files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream is(f);
        try {
            docs[f.filename().string()] = json::parse(is);
        } catch (const json::parse_error&) {
            docs[f.filename().string()] = {{"error", "unparseable"}};
        }
    }
    doc["documents"] = std::move(docs);
    const fs::path file = fs::path(cfg.out_dir) / "report.json";
    write_text_file(file, doc.dump(2) + "\n");
    std::cout << "wrote " << file.string() << " (" << files.size() << " documents)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Hecke eigenvalue power moments over quaternary polynomials"};
    app.set_config("--config", "", "flat key=value configuration file; flags win");
    app.option_defaults()->always_capture_default();

    app.add_option("--weight", cfg.weight, "eigenform weight (12 16 18 20 22 26)");
    app.add_option("--limit", cfg.limit, "coefficient/table limit");
    app.add_option("--prime-bound", cfg.prime_bound, "Euler product cutoff");
    app.add_option("--r", cfg.r, "moment order r");
    app.add_option("--method", cfg.method, "moment path")
        ->check(CLI::IsMember({"sieve", "lattice"}));
    app.add_option("--poly", cfg.poly, "quaternary polynomial")
        ->check(CLI::IsMember({"alpha", "alpha1", "alpha2"}));
    app.add_option("--x-min", cfg.x_min, "first checkpoint");
    app.add_option("--x-max", cfg.x_max, "last checkpoint");
    app.add_option("--per-decade", cfg.per_decade, "checkpoints per decade");
    app.add_option("--out", cfg.out, "table export format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--cache-dir", cfg.cache_dir, "binary cache directory")
        ->envname("TRIPOWER_CACHE_DIR");
    app.add_option("--out-dir", cfg.out_dir, "output directory");
    app.add_option("--threads", cfg.threads, "worker threads (0 = auto)");

    auto* eig = app.add_subcommand("eigenvalues", "build coefficient table, verify, export");
    auto* verify = app.add_subcommand("verify", "run one verification suite");
    verify->add_option("target", cfg.target, "hecke | deligne | chebyshev | repidentity")
        ->required()
        ->check(CLI::IsMember({"hecke", "deligne", "chebyshev", "repidentity"}));
    auto* mom = app.add_subcommand("moments", "compute S_r checkpoints and fits");
    auto* cons = app.add_subcommand("constant", "evaluate the main-term constant C");
    auto* rep = app.add_subcommand("report", "aggregate JSON summaries in --out-dir");
    for (auto* sub : {eig, verify, mom, cons, rep}) sub->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eig->parsed()) return cmd_eigenvalues(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (mom->parsed()) return cmd_moments(cfg);
        if (cons->parsed()) return cmd_constant(cfg);
        if (rep->parsed()) return cmd_report(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const resource_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceLimit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsage;
}
