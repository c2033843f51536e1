#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "nsdde/nsdde.hpp"
#include "run_config.hpp"

namespace nsdde::cli {

using nlohmann::json;

namespace {

constexpr const char* kConditionSampler = "mt19937_64/salted-stream-v1";

struct OutputFile {
    std::string name;
    std::string contents;
};

class RunContext {
public:
    RunContext(const CliOptions& options, RunConfig config)
        : options_(options), config_(std::move(config)) {
        if (options.seed) config_.seed = *options.seed;
        dir_ = options.output ? *options.output : std::filesystem::path(config_.output_dir);
        threads_ = resolve_threads(options);
    }

    const RunConfig& config() const { return config_; }
    unsigned threads() const { return threads_; }
    bool strict() const { return options_.strict; }
    bool options_dump() const { return options_.dump_increments; }
    const std::filesystem::path& dir() const { return dir_; }

    void add(std::string name, std::string contents) {
        files_.push_back({std::move(name), std::move(contents)});
    }

    json& extra() { return extra_; }

    // Single writer, after all computation has finished.
    void flush() {
        std::filesystem::create_directories(dir_);
        json manifest;
        manifest["tool"] = "nsdde_sim";
        manifest["version"] = kVersion;
        manifest["command"] = options_.command;
        manifest["config"] = config_.to_json();
        manifest["seed"] = config_.seed;
        manifest["strict"] = options_.strict;
        manifest["algorithms"] = {{"brownian", kBrownianAlgorithm},
                                  {"scheme", kSchemeId},
                                  {"quadrature", kQuadratureId},
                                  {"condition_sampler", kConditionSampler}};
        json outputs = json::array();
        for (const auto& f : files_) outputs.push_back(f.name);
        manifest["outputs"] = outputs;
        for (const auto& [k, v] : extra_.items()) manifest[k] = v;
        files_.push_back({"manifest.json", manifest.dump(2) + "\n"});

        for (const auto& f : files_) {
            std::ofstream out(dir_ / f.name, std::ios::binary | std::ios::trunc);
            out << f.contents;
            if (!out) throw std::runtime_error("cannot write " + (dir_ / f.name).string());
        }
    }

private:
    const CliOptions& options_;
    RunConfig config_;
    std::filesystem::path dir_;
    unsigned threads_ = 1;
    std::vector<OutputFile> files_;
    json extra_ = json::object();
};

std::string padded(std::uint64_t value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%05llu", static_cast<unsigned long long>(value));
    return buffer;
}

int cmd_simulate(RunContext& ctx, std::ostream& out) {
    const RunConfig& config = ctx.config();
    if (config.ladder.size() != 1) {
        throw ConfigError("ladder", "simulate takes exactly one step size");
    }
    const NsddeModel model = build_model(config);
    const InitialSegment xi = config.xi.build(model.state_dim());
    const DelayGrid grid = make_grid(config.tau, config.horizon, config.ladder[0]);

    json diverged = json::array();
    for (std::uint64_t p = 0; p < config.n_paths; ++p) {
        const BrownianPath noise = generate(grid, model.noise_dim(), config.seed, p);
        if (ctx.options_dump()) {
            std::ostringstream bin(std::ios::binary);
            write_increments_binary(bin, noise);
            ctx.add("noise_" + padded(p) + ".bin", bin.str());
        }
        try {
            const PathGrid path = simulate(model, xi, grid, noise);
            std::ostringstream csv;
            write_path_csv(csv, path);
            ctx.add("path_" + padded(p) + ".csv", csv.str());
        } catch (const NonFiniteStateError& e) {
            diverged.push_back({{"path", p}, {"step", e.step()}});
        }
    }
    ctx.extra()["diverged_paths"] = diverged;
    ctx.flush();
    out << "simulate: " << config.n_paths << " paths, " << diverged.size() << " diverged, wrote "
        << ctx.dir().string() << "\n";
    return ctx.strict() && !diverged.empty() ? kExitDiverged : kExitOk;
}

int cmd_converge(RunContext& ctx, std::ostream& out) {
    const RunConfig& config = ctx.config();
    if (config.ladder.size() < 2) throw ConfigError("ladder", "converge needs at least two steps");
    const NsddeModel model = build_model(config);
    const ConvergenceTable table =
        converge_study(model, config.xi.build(model.state_dim()), config.tau, config.horizon,
                       config.ladder, config.epsilon, config.n_paths, config.seed, ctx.threads());
    std::ostringstream csv;
    write_convergence_csv(csv, table);
    ctx.add("convergence.csv", csv.str());

    std::uint64_t diverged = 0;
    json flagged = json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        diverged = std::max(diverged, table.rows[i].diverged_count);
        if (table.rows[i].flagged) flagged.push_back(i);
    }
    ctx.extra()["flagged_rows"] = flagged;
    ctx.extra()["exceedance_non_increasing"] = exceedance_non_increasing(table);
    ctx.flush();
    out << "converge: " << table.rows.size() << " level pairs, max diverged " << diverged
        << ", wrote " << (ctx.dir() / "convergence.csv").string() << "\n";
    return ctx.strict() && diverged > 0 ? kExitDiverged : kExitOk;
}

int cmd_moments(RunContext& ctx, std::ostream& out) {
    const RunConfig& config = ctx.config();
    if (config.n_paths < 2) throw ConfigError("n_paths", "moments needs at least two paths");
    const NsddeModel model = build_model(config);
    const InitialSegment xi = config.xi.build(model.state_dim());
    std::vector<MomentReport> reports;
    std::uint64_t diverged = 0;
    for (double delta : config.ladder) {
        reports.push_back(estimate_moments(model, xi, config.tau, config.horizon, delta,
                                           config.n_paths, config.seed, ctx.threads()));
        diverged = std::max(diverged, reports.back().diverged_count);
    }
    std::ostringstream csv;
    write_moments_csv(csv, reports);
    ctx.add("moments.csv", csv.str());
    ctx.flush();
    out << "moments: " << reports.size() << " step sizes, max diverged " << diverged << ", wrote "
        << (ctx.dir() / "moments.csv").string() << "\n";
    return ctx.strict() && diverged > 0 ? kExitDiverged : kExitOk;
}

int cmd_perturbation(RunContext& ctx, std::ostream& out) {
    const RunConfig& config = ctx.config();
    const NsddeModel model = build_model(config);
    RateFn kr;
    std::string rate_source = "unit";
    if (model.rates() || config.rates.KR) {
        kr = build_rates(config, model).KR;
        rate_source = "model";
    } else {
        kr = [](double) { return 1.0; };
    }
    const PerturbationTable table = perturbation_integrability(
        model, config.xi.build(model.state_dim()), config.tau, config.horizon, config.ladder,
        config.n_paths, config.seed, config.truncation_radius, kr, ctx.threads());
    std::ostringstream csv;
    write_perturbation_csv(csv, table);
    ctx.add("perturbation.csv", csv.str());
    ctx.extra()["lambda_rate"] = rate_source;

    std::uint64_t diverged = 0;
    for (const auto& row : table.rows) diverged = std::max(diverged, row.diverged_count);
    ctx.flush();
    out << "perturbation: " << table.rows.size() << " levels, max diverged " << diverged
        << ", wrote " << (ctx.dir() / "perturbation.csv").string() << "\n";
    return ctx.strict() && diverged > 0 ? kExitDiverged : kExitOk;
}

json report_json(const ConditionReport& report) {
    json violations = json::array();
    for (const Violation& v : report.violations) {
        violations.push_back({{"sample", v.sample_index},
                              {"kind", v.kind},
                              {"inputs", v.inputs},
                              {"t", v.t},
                              {"lhs", v.lhs},
                              {"rhs", v.rhs}});
    }
    json estimates = json::object();
    for (const auto& [k, v] : report.estimates) estimates[k] = v;
    return {{"condition", report.condition_id},
            {"samples", report.samples_tested},
            {"samples_requested", report.samples_requested},
            {"verdict", to_string(report.verdict)},
            {"violation_count", report.violation_count},
            {"violations", violations},
            {"estimates", estimates}};
}

int cmd_check(RunContext& ctx, std::ostream& out) {
    const RunConfig& config = ctx.config();
    const NsddeModel model = build_model(config);
    const ConditionSpec spec = build_rates(config, model);
    const DelayGrid grid = make_grid(config.tau, config.horizon, config.ladder.front());

    std::vector<ConditionReport> reports;
    reports.push_back(check_h(model, grid, config.box_radius, config.samples, config.seed));
    reports.push_back(check_c2(model, spec, grid, config.samples, config.seed));
    reports.push_back(check_c3(model, spec, grid, config.samples, config.seed));
    reports.push_back(check_c4(model.neutral(), model.state_dim(), spec.kappa, config.box_radius,
                               config.samples, config.seed));
    reports.back().estimates["kappa_estimate"] = estimate_kappa(
        model.neutral(), model.state_dim(), config.box_radius, config.samples, config.seed);

    bool all_pass = true;
    json doc;
    doc["model"] = model.id();
    doc["reports"] = json::array();
    for (const auto& r : reports) {
        all_pass = all_pass && r.verdict == Verdict::Pass;
        doc["reports"].push_back(report_json(r));
    }
    doc["all_pass"] = all_pass;
    ctx.add("check.json", doc.dump(2) + "\n");
    ctx.flush();

    out << "check:";
    for (const auto& r : reports) out << ' ' << r.condition_id << '=' << to_string(r.verdict);
    out << ", wrote " << (ctx.dir() / "check.json").string() << "\n";
    return all_pass ? kExitOk : kExitConditionFailed;
}

}  // namespace

unsigned resolve_threads(const CliOptions& options) {
    if (options.threads && *options.threads > 0) return *options.threads;
    if (const char* env = std::getenv("NSDDE_SIM_THREADS")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && value > 0 && value < 1024) return static_cast<unsigned>(value);
    }
    return 1;
}

int run_command(const CliOptions& options, std::ostream& out, std::ostream& err) {
    try {
        RunContext ctx(options, load_config(options.config));
        if (options.command == "simulate") return cmd_simulate(ctx, out);
        if (options.command == "converge") return cmd_converge(ctx, out);
        if (options.command == "moments") return cmd_moments(ctx, out);
        if (options.command == "perturbation") return cmd_perturbation(ctx, out);
        if (options.command == "check") return cmd_check(ctx, out);
        err << "error: unknown subcommand '" << options.command << "'\n";
        return kExitInvalidInput;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NonFiniteState || e.kind() == ErrorKind::DegenerateSampling) {
            err << "error: " << e.what() << "\n";
            return kExitDiverged;
        }
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

}  // namespace nsdde::cli
