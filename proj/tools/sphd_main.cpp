// sphd: energies, kernel splits, and t-design tooling for point sets on S^d.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphd/sphd.hpp"

namespace fs = std::filesystem;
using sphd::json;

namespace {

struct GlobalOpts {
    int threads = 0;
    bool deterministic = false;
    std::string format = "json";
    std::string output;
    std::string cache_dir;

    sphd::ExecPolicy policy() const { return {threads, deterministic}; }

    std::string resolved_cache_dir() const {
        if (!cache_dir.empty()) return cache_dir;
        if (const char* env = std::getenv("SPHD_CACHE_DIR")) return env;
        return {};
    }
};

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.output.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(g.output);
    if (!out) throw sphd::invalid_input("cannot write output file '" + g.output + "'");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void emit_json(const GlobalOpts& g, const json& j) { emit(g, j.dump(2)); }

void require_json(const GlobalOpts& g, const char* sub) {
    if (g.format != "json")
        throw sphd::invalid_input(std::string(sub) + ": only json output is supported");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Coefficient cache, keyed by a content hash of the full parameter tuple so a
// stale file can never satisfy a different request. Unreadable or mismatching
// cache entries are silently recomputed and overwritten.
sphd::KernelCoefficients get_coefficients(sphd::KernelKind kind, double s, double lambda, int d,
                                          int nmax, const std::string& cache_dir) {
    auto compute = [&] {
        return kind == sphd::KernelKind::riesz ? sphd::riesz_coefficients(s, lambda, d, nmax)
                                               : sphd::log_coefficients(lambda, d, nmax);
    };
    if (cache_dir.empty()) return compute();
    std::string key = std::string(sphd::to_string(kind)) + "|s=" + sphd::format_double(s) +
                      "|lambda=" + sphd::format_double(lambda) + "|d=" + std::to_string(d) +
                      "|nmax=" + std::to_string(nmax);
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
    fs::path file = fs::path(cache_dir) / ("kernel-" + std::string(hex) + ".json");
    if (fs::exists(file)) {
        try {
            std::ifstream in(file);
            json j = json::parse(in);
            sphd::KernelCoefficients K = sphd::kernel_from_json(j);
            bool match = K.kind == kind && K.lambda == lambda && K.d == d && K.nmax == nmax &&
                         (kind == sphd::KernelKind::log || K.s == s);
            if (match) return K;
        } catch (const std::exception&) {
            // fall through to recompute
        }
    }
    sphd::KernelCoefficients K = compute();
    std::error_code ec;
    fs::create_directories(cache_dir, ec);
    std::ofstream out(file);
    if (out) out << sphd::to_json(K).dump();
    return K;
}

struct EnergyArgs {
    std::string kind;
    double s = 0.0;
    std::string file;
    std::size_t random_n = 0, fibonacci_n = 0;
    int d = 2;
    std::uint64_t seed = 1;
    bool allow_single = false;
    bool split = false;
    double lambda = 0.0;
    int t = 0, nmax = 1000;
};

sphd::PointSet resolve_points(const std::string& file, std::size_t random_n,
                              std::size_t fibonacci_n, int d, std::uint64_t seed) {
    int sources = (!file.empty()) + (random_n > 0) + (fibonacci_n > 0);
    if (sources != 1)
        throw sphd::invalid_input("specify exactly one point source: --file, --random or "
                                  "--fibonacci");
    if (!file.empty()) return sphd::load_point_set(file, d);
    if (random_n > 0) return sphd::generate_random_uniform(d, random_n, seed);
    if (d != 2) throw sphd::invalid_input("--fibonacci requires --d 2");
    return sphd::generate_fibonacci(fibonacci_n);
}

void run_energy(const GlobalOpts& g, const EnergyArgs& a) {
    require_json(g, "energy");
    sphd::PointSet X = resolve_points(a.file, a.random_n, a.fibonacci_n, a.d, a.seed);
    sphd::EnergyKind kind = sphd::energy_kind_from_string(a.kind);
    sphd::EnergyReport rep = kind == sphd::EnergyKind::log
                                 ? sphd::log_energy(X, g.policy(), a.allow_single)
                                 : sphd::riesz_energy(X, a.s, g.policy(), a.allow_single);
    json j = sphd::to_json(rep);
    if (a.split) {
        if (a.t < 1 || a.lambda <= 0.0)
            throw sphd::invalid_input("energy --split needs --t >= 1 and --lambda > 0");
        sphd::KernelKind kk =
            kind == sphd::EnergyKind::riesz ? sphd::KernelKind::riesz : sphd::KernelKind::log;
        sphd::KernelCoefficients K =
            get_coefficients(kk, a.s, a.lambda, X.d, a.nmax, g.resolved_cache_dir());
        sphd::KernelSplitEnergy split = sphd::kernel_split_energy(X, K, a.t, g.policy());
        j["split"] = {{"t", a.t},
                      {"lambda", a.lambda},
                      {"nmax", a.nmax},
                      {"head", split.head},
                      {"tail", split.tail},
                      {"total", split.total()}};
    }
    emit_json(g, j);
}

struct VerifyArgs {
    std::string file;
    int d = 2, t = 1;
    double tolerance = 1e-8;
    int monomial_checks = 10;
    std::uint64_t seed = 1234;
};

void run_verify(const GlobalOpts& g, const VerifyArgs& a) {
    require_json(g, "verify");
    sphd::PointSet X = sphd::load_point_set(a.file, a.d);
    sphd::DesignCertificate cert =
        sphd::verify_design(X, a.t, a.tolerance, a.monomial_checks, a.seed, g.policy());
    emit_json(g, sphd::to_json(cert));
}

struct ConstructArgs {
    int d = 2, t = 1;
    std::size_t N = 0;
    std::uint64_t seed = 1;
    std::string out_points;
    sphd::ConstructOptions opt;
};

void run_construct(const GlobalOpts& g, const ConstructArgs& a) {
    require_json(g, "construct");
    auto [X, cert] = sphd::construct_design(a.d, a.t, a.N, a.seed, a.opt, g.policy());
    if (!a.out_points.empty()) {
        std::ostringstream hdr;
        hdr << "d=" << a.d << " t=" << a.t << " N=" << X.size() << " seed=" << a.seed
            << " total_residual=" << sphd::format_double(cert.total_residual);
        sphd::save_point_set(X, a.out_points, hdr.str());
    }
    json j = sphd::to_json(cert);
    j["N"] = X.size();
    j["d"] = a.d;
    j["seed"] = a.seed;
    if (!a.out_points.empty()) j["points_file"] = a.out_points;
    emit_json(g, j);
}

struct KernelArgs {
    std::string kind;
    double s = 0.0, lambda = 0.0;
    int d = 2, t = 0, nmax = 1000, grid = 101;
};

void run_kernel(const GlobalOpts& g, const KernelArgs& a) {
    sphd::KernelKind kind = a.kind == "riesz" ? sphd::KernelKind::riesz : sphd::KernelKind::log;
    if (a.grid < 1) throw sphd::invalid_input("kernel: --grid >= 1 required");
    sphd::KernelCoefficients K =
        get_coefficients(kind, a.s, a.lambda, a.d, a.nmax, g.resolved_cache_dir());
    // grid of cell midpoints: stays inside (-1, 1) where both sides are finite
    std::vector<std::array<double, 4>> rows;
    rows.reserve(a.grid);
    for (int k = 0; k < a.grid; ++k) {
        double x = -1.0 + (k + 0.5) * 2.0 / a.grid;
        double head = sphd::kernel_head_eval(K, a.t, x);
        double tail = sphd::kernel_tail_eval(K, a.t, x);
        double exact;
        if (kind == sphd::KernelKind::riesz) {
            double scale = K.distance_scale();
            head *= scale;
            tail *= scale;
            exact = std::pow(2.0 * (1.0 - x), -0.5 * a.s);
        } else {
            exact = std::log(1.0 / (1.0 - x));
        }
        rows.push_back({x, head, tail, exact});
    }
    if (g.format == "csv") {
        std::string out = "x,head,tail,exact\n";
        for (const auto& r : rows)
            out += sphd::format_double(r[0]) + ',' + sphd::format_double(r[1]) + ',' +
                   sphd::format_double(r[2]) + ',' + sphd::format_double(r[3]) + '\n';
        emit(g, out);
    } else {
        json j;
        j["kind"] = a.kind;
        if (kind == sphd::KernelKind::riesz) j["s"] = a.s;
        j["lambda"] = a.lambda;
        j["d"] = a.d;
        j["t"] = a.t;
        j["nmax"] = a.nmax;
        json table = json::array();
        for (const auto& r : rows)
            table.push_back({{"x", r[0]}, {"head", r[1]}, {"tail", r[2]}, {"exact", r[3]}});
        j["rows"] = table;
        emit_json(g, j);
    }
}

struct PredictArgs {
    std::string kind;
    double s = 0.0;
    int d = 2, t = -1;
    std::size_t N = 0;
};

void run_predict(const GlobalOpts& g, const PredictArgs& a) {
    require_json(g, "predict");
    sphd::AsymptoticPrediction p = a.kind == "log"
                                       ? sphd::predict_log_energy(a.d, a.N)
                                       : sphd::predict_riesz_energy(a.d, a.s, a.N, a.t);
    emit_json(g, sphd::to_json(p));
}

struct SweepArgs {
    std::string source = "designs";
    int d = 2;
    int t_min = 2, t_max = 0;
    std::vector<std::size_t> n_values;
    std::vector<std::string> files;
    std::vector<std::string> kinds;
    std::uint64_t seed = 1;
    bool no_polish = false;
    int restarts = 1;
};

std::vector<sphd::SweepKindSpec> parse_kinds(const std::vector<std::string>& kinds) {
    std::vector<sphd::SweepKindSpec> out;
    for (const auto& k : kinds) {
        sphd::SweepKindSpec spec;
        if (k == "log") {
            spec.kind = sphd::EnergyKind::log;
        } else if (k.rfind("riesz:", 0) == 0) {
            spec.kind = sphd::EnergyKind::riesz;
            try {
                spec.s = std::stod(k.substr(6));
            } catch (const std::exception&) {
                throw sphd::invalid_input("sweep: bad kind '" + k + "'");
            }
        } else {
            throw sphd::invalid_input("sweep: bad kind '" + k +
                                      "' (expected log or riesz:<s>)");
        }
        out.push_back(spec);
    }
    return out;
}

void run_sweep(const GlobalOpts& g, const SweepArgs& a) {
    sphd::SweepOptions opt;
    opt.d = a.d;
    opt.seed = a.seed;
    opt.kinds = parse_kinds(a.kinds);
    opt.construct.polish_energy = !a.no_polish;
    opt.construct.restarts = a.restarts;
    if (a.source == "designs") {
        opt.source = sphd::SweepSource::designs;
        for (int t = a.t_min; t <= a.t_max; ++t) opt.t_values.push_back(t);
    } else if (a.source == "files") {
        opt.source = sphd::SweepSource::files;
        opt.files = a.files;
    } else if (a.source == "fibonacci" || a.source == "random") {
        opt.source = a.source == "fibonacci" ? sphd::SweepSource::fibonacci
                                             : sphd::SweepSource::random;
        opt.N_values = a.n_values;
    } else {
        throw sphd::invalid_input("sweep: unknown source '" + a.source + "'");
    }
    std::vector<sphd::SweepRecord> records = sphd::sweep(opt, g.policy());
    if (g.format == "csv")
        emit(g, sphd::sweep_csv(records));
    else
        emit_json(g, sphd::to_json(records));
}

struct FitArgs {
    std::string input;
};

std::vector<sphd::SweepRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sphd::invalid_input("fit: cannot open '" + path + "'");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw sphd::invalid_input("fit: empty input file");
    std::vector<sphd::SweepRecord> records;
    if (content[first] == '[') {
        json arr = json::parse(content);
        for (const auto& j : arr) {
            sphd::SweepRecord r;
            r.N = j.at("N").get<std::size_t>();
            r.residual = j.value("residual", 0.0);
            r.ok = j.value("ok", true);
            records.push_back(r);
        }
        return records;
    }
    // CSV: only the leading numeric columns matter for the fit, and source is
    // last, so a plain comma split is safe for what we read.
    std::istringstream lines(content);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() < 10) continue;
        sphd::SweepRecord r;
        try {
            r.N = static_cast<std::size_t>(std::stoull(cells[1]));
            if (cells[5].empty()) {
                r.ok = false;
            } else {
                r.residual = std::stod(cells[8]);
            }
        } catch (const std::exception&) {
            continue;
        }
        records.push_back(r);
    }
    return records;
}

void run_fit(const GlobalOpts& g, const FitArgs& a) {
    sphd::FitResult fit = sphd::fit_residual_exponent(read_records(a.input));
    if (g.format == "csv")
        emit(g, sphd::fit_csv(fit));
    else
        emit_json(g, sphd::to_json(fit));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete energies, kernel splits and spherical t-designs on S^d"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_flag("--deterministic", g.deterministic,
                 "bit-identical reductions regardless of thread count");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", g.output, "write the report here instead of stdout");
    app.add_option("--cache-dir", g.cache_dir,
                   "kernel coefficient cache directory (or env SPHD_CACHE_DIR)");

    EnergyArgs ea;
    auto* energy = app.add_subcommand("energy", "discrete log/Riesz energy of a point set");
    energy->add_option("--kind", ea.kind, "log or riesz")
        ->required()
        ->check(CLI::IsMember({"log", "riesz"}));
    energy->add_option("--s", ea.s, "Riesz exponent");
    energy->add_option("--file", ea.file, "point set file");
    energy->add_option("--random", ea.random_n, "use N random uniform points");
    energy->add_option("--fibonacci", ea.fibonacci_n, "use the N-point Fibonacci lattice");
    energy->add_option("--d", ea.d, "sphere dimension")->capture_default_str();
    energy->add_option("--seed", ea.seed, "seed for --random");
    energy->add_flag("--allow-single", ea.allow_single, "report 0 for N < 2");
    energy->add_flag("--split", ea.split, "also report the head/tail kernel split");
    energy->add_option("--lambda", ea.lambda, "expansion parameter for --split");
    energy->add_option("--t", ea.t, "split degree for --split");
    energy->add_option("--nmax", ea.nmax, "expansion truncation")->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "certify the t-design property");
    verify->add_option("--file", va.file, "point set file")->required();
    verify->add_option("--d", va.d, "sphere dimension")->capture_default_str();
    verify->add_option("--t", va.t, "design degree")->required();
    verify->add_option("--tolerance", va.tolerance, "verdict tolerance")->capture_default_str();
    verify->add_option("--monomial-checks", va.monomial_checks, "random monomial spot checks")
        ->capture_default_str();
    verify->add_option("--seed", va.seed, "seed for the monomial spot check");

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a well-separated t-design");
    construct->add_option("--d", ca.d, "sphere dimension")->capture_default_str();
    construct->add_option("--t", ca.t, "design degree")->required();
    construct->add_option("--N", ca.N, "node count (0 = (t+1)^d)");
    construct->add_option("--seed", ca.seed, "restart seed");
    construct->add_option("--out", ca.out_points, "write the point set here");
    construct->add_option("--max-iters", ca.opt.max_iters, "optimizer iteration cap")
        ->capture_default_str();
    construct->add_option("--restarts", ca.opt.restarts, "restart count")->capture_default_str();
    construct->add_option("--tolerance", ca.opt.tolerance, "certificate tolerance")
        ->capture_default_str();
    construct->add_option("--separation-weight", ca.opt.separation_weight,
                          "softplus separation penalty weight");
    construct->add_option("--separation-target", ca.opt.separation_target,
                          "separation penalty target distance (0 = N^{-1/d})");
    construct->add_flag("--polish-energy", ca.opt.polish_energy,
                        "descend log energy along the design manifold");

    KernelArgs ka;
    auto* kernel = app.add_subcommand("kernel", "tabulate the head/tail kernel split");
    kernel->add_option("--kind", ka.kind, "log or riesz")
        ->required()
        ->check(CLI::IsMember({"log", "riesz"}));
    kernel->add_option("--s", ka.s, "Riesz exponent");
    kernel->add_option("--d", ka.d, "sphere dimension")->capture_default_str();
    kernel->add_option("--lambda", ka.lambda, "expansion parameter")->required();
    kernel->add_option("--t", ka.t, "split degree")->required();
    kernel->add_option("--nmax", ka.nmax, "expansion truncation")->capture_default_str();
    kernel->add_option("--grid", ka.grid, "number of evaluation points")->capture_default_str();

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "asymptotic energy prediction");
    predict->add_option("--kind", pa.kind, "log or riesz")
        ->required()
        ->check(CLI::IsMember({"log", "riesz"}));
    predict->add_option("--s", pa.s, "Riesz exponent");
    predict->add_option("--d", pa.d, "sphere dimension")->capture_default_str();
    predict->add_option("--N", pa.N, "point count")->required();
    predict->add_option("--t", pa.t, "design degree (s = d prediction)");

    SweepArgs sa;
    auto* sweepc = app.add_subcommand("sweep", "measure energies across a family of point sets");
    sweepc->add_option("--source", sa.source, "designs, files, fibonacci or random")
        ->check(CLI::IsMember({"designs", "files", "fibonacci", "random"}))
        ->capture_default_str();
    sweepc->add_option("--d", sa.d, "sphere dimension")->capture_default_str();
    sweepc->add_option("--t-min", sa.t_min, "first design degree")->capture_default_str();
    sweepc->add_option("--t-max", sa.t_max, "last design degree");
    sweepc->add_option("--N", sa.n_values, "N values for fibonacci/random")->delimiter(',');
    sweepc->add_option("--file", sa.files, "point set files");
    sweepc->add_option("--kinds", sa.kinds, "energy kinds, e.g. log,riesz:2,riesz:3")
        ->required()
        ->delimiter(',');
    sweepc->add_option("--seed", sa.seed, "construction / sampling seed");
    sweepc->add_flag("--no-polish", sa.no_polish, "skip the energy polish for designs");
    sweepc->add_option("--restarts", sa.restarts, "construction restarts")
        ->capture_default_str();

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "fit the residual growth exponent of a sweep");
    fit->add_option("--input", fa.input, "sweep output (json or csv)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*energy) run_energy(g, ea);
        else if (*verify) run_verify(g, va);
        else if (*construct) run_construct(g, ca);
        else if (*kernel) run_kernel(g, ka);
        else if (*predict) run_predict(g, pa);
        else if (*sweepc) run_sweep(g, sa);
        else if (*fit) run_fit(g, fa);
        return 0;
    } catch (const sphd::singular_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sphd::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
