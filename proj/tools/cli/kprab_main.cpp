// kprab: command-line front end. Talks to the library through the C API only.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kprab/kprab.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kSuiteFailed = 2 };

// Config and domain problems. Exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A failing library call; carries the library message.
struct LibError : std::runtime_error {
    kprab_status status;
    LibError(kprab_status s, const std::string& m) : std::runtime_error(m), status(s) {}
};

void check(kprab_status s) {
    if (s != KPRAB_OK)
        throw LibError(s, std::string(kprab_status_name(s)) + ": " + kprab_last_error());
}

struct FunctionDeleter {
    void operator()(kprab_function* f) const { kprab_function_free(f); }
};
using Function = std::unique_ptr<kprab_function, FunctionDeleter>;

struct ReportsDeleter {
    void operator()(kprab_reports* r) const { kprab_reports_free(r); }
};

std::string fmt(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, end);
}

// ---- config ----

const std::map<std::string, std::set<std::string>> kKeys = {
    {"eval", {"function", "z", "z_min", "z_max", "points"}},
    {"apply", {"operator", "input", "test_function", "t_end"}},
    {"transform", {"kind", "u", "target", "input", "test_function", "t_end", "tol"}},
    {"solve-relaxation", {"lambda", "delta", "K_init", "forcing", "t_end"}},
    {"solve-diffusion", {"K_diff", "profile", "times", "modes"}},
    {"verify", {}},
};
const std::set<std::string> kCommon = {"command", "k",        "alpha",     "mu",     "gamma", "omega", "nu",
                                       "rel_tol", "max_terms", "grid_n", "threads", "out"};

struct Config {
    std::string command;
    json values = json::object();
    fs::path base_dir = ".";

    bool has(const std::string& key) const { return values.contains(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback)
                return *fallback;
            throw UsageError("missing required key \"" + key + "\"");
        }
        const auto& v = values.at(key);
        if (!v.is_number())
            throw UsageError("key \"" + key + "\" must be a number");
        return v.get<double>();
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback)
                return *fallback;
            throw UsageError("missing required key \"" + key + "\"");
        }
        const auto& v = values.at(key);
        if (!v.is_string())
            throw UsageError("key \"" + key + "\" must be a string");
        return v.get<std::string>();
    }

    fs::path path(const std::string& key) const {
        fs::path p = text(key);
        return p.is_absolute() ? p : base_dir / p;
    }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw UsageError("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void require(bool ok, const std::string& msg) {
    if (!ok)
        throw UsageError(msg);
}

// Parameter bounds, checked before anything runs.
void validate(const Config& c) {
    for (const char* key : {"k", "alpha", "mu"})
        if (c.has(key)) {
            const double v = c.number(key);
            require(v > 0 && std::isfinite(v), std::string(key) + " must be > 0 (got " + fmt(v) + ")");
        }
    for (const char* key : {"gamma", "omega"})
        if (c.has(key))
            require(std::isfinite(c.number(key)), std::string(key) + " must be finite");
    if (c.has("nu")) {
        const double nu = c.number("nu");
        require(nu >= 0 && nu <= 1, "nu must be in [0,1] (got " + fmt(nu) + ")");
    }
    if (c.has("rel_tol")) {
        const double t = c.number("rel_tol");
        require(t > 0 && t < 1, "rel_tol must be in (0,1) (got " + fmt(t) + ")");
    }
    if (c.has("max_terms"))
        require(c.number("max_terms") >= 1, "max_terms must be >= 1");
    if (c.has("grid_n"))
        require(c.number("grid_n") >= 2, "grid_n must be >= 2");
    for (const char* key : {"t_end", "u", "K_diff", "tol"})
        if (c.has(key)) {
            const double v = c.number(key);
            require(v > 0 && std::isfinite(v), std::string(key) + " must be > 0 (got " + fmt(v) + ")");
        }
    if (c.has("points"))
        require(c.number("points") >= 1, "points must be >= 1");
    for (const char* key : {"input", "forcing", "profile"})
        if (c.has(key)) {
            const auto p = c.path(key);
            require(fs::exists(p), std::string(key) + " file not found: " + p.string());
        }
}

Config parse_config(const std::string& source, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        // nlohmann reports "at line L, column C"
        throw UsageError(origin + ": parse error: " + e.what());
    }
    if (!doc.is_object())
        throw UsageError(origin + ": configuration must be a JSON object");

    Config c;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it->is_object() || it->is_array())
            throw UsageError(origin + ": key \"" + it.key() + "\" must hold a string or number");
    }
    if (doc.contains("command")) {
        if (!doc["command"].is_string())
            throw UsageError(origin + ": key \"command\" must be a string");
        c.command = doc["command"].get<std::string>();
    }
    c.values = std::move(doc);
    return c;
}

void check_keys(const Config& c) {
    const auto it = kKeys.find(c.command);
    if (it == kKeys.end())
        throw UsageError("unknown command \"" + c.command + "\"");
    for (const auto& item : c.values.items()) {
        if (!kCommon.count(item.key()) && !it->second.count(item.key()))
            throw UsageError("unknown key \"" + item.key() + "\" for command " + c.command);
    }
}

kprab_params params(const Config& c) {
    return {c.number("k"), c.number("alpha"), c.number("mu"), c.number("gamma"), c.number("omega")};
}

kprab_series_control control(const Config& c) {
    return {c.number("rel_tol", 1e-14), static_cast<int>(c.number("max_terms", 500))};
}

size_t cells(const Config& c, double fallback) { return static_cast<size_t>(c.number("grid_n", fallback)); }

// ---- CSV ----

void write_csv(const fs::path& p, const std::string& header, const std::vector<double>& x,
               const std::vector<double>& y) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + p.string());
    out << header << '\n';
    for (size_t i = 0; i < x.size(); ++i)
        out << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
    if (!out)
        throw UsageError("write failed: " + p.string());
}

void write_function(const fs::path& p, const std::string& header, const kprab_function* f) {
    const size_t n = kprab_function_size(f);
    std::vector<double> x(n), y(n);
    check(kprab_function_values(f, y.data(), n));
    const double x0 = kprab_function_origin(f), h = kprab_function_step(f);
    for (size_t i = 0; i < n; ++i)
        x[i] = x0 + static_cast<double>(i) * h;
    write_csv(p, header, x, y);
}

double parse_double(std::string_view s, const std::string& where) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError(where + ": not a number: \"" + std::string(s) + "\"");
    return v;
}

// Two-column CSV with a header row on a uniform grid.
Function read_function(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw UsageError("cannot open " + p.string());
    std::string line;
    std::vector<double> x, y;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty() || line == "\r")
            continue;
        const auto comma = line.find(',');
        const std::string where = p.string() + ":" + std::to_string(lineno);
        if (comma == std::string::npos)
            throw UsageError(where + ": expected two comma-separated columns");
        x.push_back(parse_double(std::string_view(line).substr(0, comma), where));
        y.push_back(parse_double(std::string_view(line).substr(comma + 1), where));
    }
    if (x.size() < 2)
        throw UsageError(p.string() + ": need at least two data rows");
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (size_t i = 1; i < x.size(); ++i)
        if (std::fabs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw UsageError(p.string() + ": x column must be uniformly spaced");
    kprab_function* f = nullptr;
    check(kprab_function_create(x.front(), h, x.size(), y.data(), nullptr, &f));
    return Function(f);
}

// Built-in samples on [0, t_end].
Function builtin_function(const std::string& name, double t_end, size_t n) {
    using Fn = double (*)(double);
    static const std::map<std::string, std::pair<Fn, Fn>> table = {
        {"one", {[](double) { return 1.0; }, [](double) { return 0.0; }}},
        {"t", {[](double t) { return t; }, [](double) { return 1.0; }}},
        {"t2", {[](double t) { return t * t; }, [](double t) { return 2 * t; }}},
        {"exp_neg", {[](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); }}},
        {"sin", {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }}},
        {"t_exp_neg",
         {[](double t) { return t * std::exp(-t); }, [](double t) { return (1 - t) * std::exp(-t); }}},
        {"quad", {[](double t) { return 1 + t + t * t; }, [](double t) { return 1 + 2 * t; }}},
    };
    const auto it = table.find(name);
    if (it == table.end())
        throw UsageError("unknown test_function \"" + name + "\"");
    const double h = t_end / static_cast<double>(n);
    std::vector<double> v(n + 1), d(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * h;
        v[i] = it->second.first(t);
        d[i] = it->second.second(t);
    }
    kprab_function* f = nullptr;
    check(kprab_function_create(0.0, h, n + 1, v.data(), d.data(), &f));
    return Function(f);
}

Function input_function(const Config& c) {
    if (c.has("input") && c.has("test_function"))
        throw UsageError("give either \"input\" or \"test_function\", not both");
    if (c.has("input"))
        return read_function(c.path("input"));
    if (c.has("test_function"))
        return builtin_function(c.text("test_function"), c.number("t_end", 1.0), cells(c, 1024));
    throw UsageError("missing required key \"input\" (or \"test_function\")");
}

kprab_operator operator_kind(const std::string& s) {
    static const std::map<std::string, kprab_operator> table = {
        {"integral", KPRAB_OP_INTEGRAL},
        {"derivative", KPRAB_OP_DERIVATIVE},
        {"regularized", KPRAB_OP_REG_DERIVATIVE},
        {"hilfer", KPRAB_OP_HILFER},
        {"regularized_hilfer", KPRAB_OP_REG_HILFER},
    };
    const auto it = table.find(s);
    if (it == table.end())
        throw UsageError("unknown operator \"" + s +
                         "\" (integral, derivative, regularized, hilfer, regularized_hilfer)");
    return it->second;
}

kprab_transform_kind transform_kind(const std::string& s) {
    if (s == "laplace")
        return KPRAB_LAPLACE;
    if (s == "sumudu")
        return KPRAB_SUMUDU;
    throw UsageError("unknown transform kind \"" + s + "\" (laplace, sumudu)");
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string_view rest = s;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(rest.substr(0, comma), "key \"" + key + "\""));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    if (out.empty())
        throw UsageError("key \"" + key + "\" is empty");
    return out;
}

// ---- commands ----

int run_eval(const Config& c, const fs::path& out) {
    const std::string fn = c.text("function", "ml_k");
    if (fn != "ml_k" && fn != "kernel" && fn != "k_gamma")
        throw UsageError("unknown function \"" + fn + "\" (ml_k, kernel, k_gamma)");
    std::vector<double> xs;
    if (c.has("z")) {
        xs.push_back(c.number("z"));
    } else {
        const double a = c.number("z_min"), b = c.number("z_max");
        const int n = static_cast<int>(c.number("points", 41));
        for (int i = 0; i < n; ++i)
            xs.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    }
    std::vector<double> ys;
    const auto ctrl = control(c);
    for (double z : xs) {
        double v = 0;
        if (fn == "k_gamma") {
            check(kprab_k_gamma(z, c.number("k"), &v));
        } else {
            const auto p = params(c);
            check(fn == "ml_k" ? kprab_ml_k(z, &p, &ctrl, &v) : kprab_kernel(z, &p, &ctrl, &v));
        }
        ys.push_back(v);
    }
    write_csv(out / "eval.csv", "x,value", xs, ys);
    if (ys.size() == 1)
        std::cout << fmt(ys[0]) << '\n';
    return kOk;
}

int run_apply(const Config& c, const fs::path& out) {
    const auto op = operator_kind(c.text("operator"));
    if ((op == KPRAB_OP_HILFER || op == KPRAB_OP_REG_HILFER) && !c.has("nu"))
        throw UsageError("missing required key \"nu\"");
    const auto f = input_function(c);
    const auto p = params(c);
    const auto ctrl = control(c);
    kprab_function* r = nullptr;
    check(kprab_apply(op, f.get(), &p, c.number("nu", 0.0), &ctrl, &r));
    Function result(r);
    write_function(out / "apply.csv", "x,value", result.get());
    return kOk;
}

int run_transform(const Config& c, const fs::path& out) {
    const auto kind = transform_kind(c.text("kind", "laplace"));
    const double u = c.number("u");
    const std::string target = c.text("target", "kernel");
    double v = 0;
    if (target == "kernel") {
        const auto p = params(c);
        check(kprab_transform_kernel(kind, u, &p, &v));
    } else if (target == "function") {
        const auto f = input_function(c);
        check(kprab_numerical_transform(kind, f.get(), u, c.number("tol", 1e-10), &v));
    } else {
        throw UsageError("unknown target \"" + target + "\" (kernel, function)");
    }
    write_csv(out / "transform.csv", "x,value", {u}, {v});
    std::cout << fmt(v) << '\n';
    return kOk;
}

int run_relaxation(const Config& c, const fs::path& out) {
    kprab_relaxation prob{params(c), c.number("nu"), c.number("lambda"), c.number("delta", 0.0),
                          c.number("K_init")};
    const double t_end = c.number("t_end", 1.0);
    const size_t n = cells(c, 1024);
    Function forcing;
    if (c.has("forcing"))
        forcing = read_function(c.path("forcing"));
    const auto ctrl = control(c);
    kprab_function* y = nullptr;
    kprab_series_info info{};
    double residual = 0;
    check(kprab_solve_relaxation(&prob, forcing.get(), t_end, n, &ctrl, &y, &info, &residual));
    Function sol(y);
    write_function(out / "relaxation.csv", "x,value", sol.get());
    std::cerr << "terms " << info.terms_used << ", tail " << fmt(info.tail_estimate) << ", residual "
              << fmt(residual) << '\n';
    return kOk;
}

int run_diffusion(const Config& c, const fs::path& out) {
    kprab_diffusion prob{params(c), c.number("nu"), c.number("K_diff")};
    const auto profile = read_function(c.path("profile"));
    const auto times = parse_list(c.text("times"), "times");
    for (double t : times)
        require(t > 0, "times must be > 0 (got " + fmt(t) + ")");
    const auto ctrl = control(c);
    std::vector<kprab_function*> raw(times.size(), nullptr);
    const auto status = kprab_solve_diffusion(&prob, profile.get(), times.data(), times.size(),
                                              static_cast<size_t>(c.number("modes", 0)), &ctrl, raw.data());
    std::vector<Function> sols;
    for (auto* f : raw)
        sols.emplace_back(f);
    check(status);
    for (size_t i = 0; i < times.size(); ++i)
        write_function(out / ("u_t" + fmt(times[i]) + ".csv"), "x,u", sols[i].get());
    return kOk;
}

int run_verify(const Config& c, const fs::path& out) {
    const auto ctrl = control(c);
    kprab_reports* raw = nullptr;
    check(kprab_verify_default(cells(c, 0), &ctrl, &raw));
    std::unique_ptr<kprab_reports, ReportsDeleter> reports(raw);
    const auto path = out / "verify_report.json";
    check(kprab_reports_write_json(reports.get(), path.string().c_str()));
    const size_t n = kprab_reports_count(reports.get());
    const size_t failed = kprab_reports_failed(reports.get());
    for (size_t i = 0; i < n; ++i) {
        if (kprab_report_passed(reports.get(), i))
            continue;
        std::cerr << "FAILED " << kprab_report_identity(reports.get(), i) << " ["
                  << kprab_report_test_function(reports.get(), i) << "] rel_err "
                  << fmt(kprab_report_max_rel_err(reports.get(), i)) << " > "
                  << fmt(kprab_report_threshold(reports.get(), i)) << ": "
                  << kprab_report_diagnostic(reports.get(), i) << '\n';
    }
    std::cout << (n - failed) << "/" << n << " cases passed; report " << path.string() << '\n';
    return failed == 0 ? kOk : kSuiteFailed;
}

int parse_threads(const std::string& s, const std::string& origin) {
    if (s == "auto")
        return 0;
    int n = -1;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n < 1)
        throw UsageError(origin + " must be a positive integer or \"auto\" (got \"" + s + "\")");
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-Prabhakar operators, transforms, solvers and identity checks"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, threads;
    std::optional<long> grid_n;
    std::optional<double> tol;
    app.add_option("--config", config_path, "JSON configuration file (flat keys)");
    app.add_option("--out", out_dir, "output directory (default: current directory)");
    app.add_option("--grid-n", grid_n, "number of grid cells (overrides grid_n)");
    app.add_option("--tol", tol, "series relative tolerance (overrides rel_tol)");
    app.add_option("--threads", threads, "thread count or \"auto\" (fallback: KPRAB_THREADS)");

    const std::map<std::string, std::string> about = {
        {"eval", "evaluate ml_k, the kernel or k_gamma at z or over a range"},
        {"apply", "apply a Prabhakar operator to a sampled input"},
        {"transform", "Laplace or Sumudu transform of the kernel or a sampled function"},
        {"solve-relaxation", "solve the Hilfer-Prabhakar relaxation equation"},
        {"solve-diffusion", "solve the space-time diffusion problem on a profile"},
        {"verify", "run the identity suite and write verify_report.json"},
    };
    for (const auto& [name, keys] : kKeys) {
        (void)keys;
        app.add_subcommand(name, about.at(name))->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        Config cfg;
        if (!config_path.empty()) {
            cfg = parse_config(read_file(config_path), config_path);
            cfg.base_dir = fs::path(config_path).parent_path();
        }
        std::string command;
        if (!app.get_subcommands().empty())
            command = app.get_subcommands().front()->get_name();
        if (!command.empty() && !cfg.command.empty() && command != cfg.command)
            throw UsageError("subcommand " + command + " does not match config command " + cfg.command);
        if (command.empty())
            command = cfg.command;
        if (command.empty())
            throw UsageError("no command given (use a subcommand or the \"command\" key)");
        cfg.command = command;

        if (grid_n)
            cfg.values["grid_n"] = *grid_n;
        if (tol)
            cfg.values["rel_tol"] = *tol;
        check_keys(cfg);
        validate(cfg);

        if (threads.empty() && cfg.has("threads"))
            threads = cfg.values["threads"].is_string() ? cfg.text("threads")
                                                        : std::to_string(static_cast<long>(cfg.number("threads")));
        if (threads.empty()) {
            if (const char* env = std::getenv("KPRAB_THREADS"); env && *env)
                check(kprab_set_threads(parse_threads(env, "KPRAB_THREADS")));
        } else {
            check(kprab_set_threads(parse_threads(threads, "--threads")));
        }

        fs::path out = out_dir.empty() ? fs::path(cfg.has("out") ? cfg.text("out") : ".") : fs::path(out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec)
            throw UsageError("cannot create output directory " + out.string() + ": " + ec.message());

        if (command == "eval")
            return run_eval(cfg, out);
        if (command == "apply")
            return run_apply(cfg, out);
        if (command == "transform")
            return run_transform(cfg, out);
        if (command == "solve-relaxation")
            return run_relaxation(cfg, out);
        if (command == "solve-diffusion")
            return run_diffusion(cfg, out);
        return run_verify(cfg, out);
    } catch (const LibError& e) {
        std::cerr << "kprab: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "kprab: " << e.what() << '\n';
        return kFailure;
    }
}
