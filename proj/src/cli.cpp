#include "logkg/cli.hpp"

#include "logkg/dataset.hpp"
#include "logkg/error.hpp"
#include "logkg/ontology.hpp"
#include "logkg/report.hpp"

#include <cstdio>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

namespace logkg {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

fs::path require_existing(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) throw DataError(what + " does not exist: " + p.string());
    return p;
}

std::vector<Technique> parse_techniques(const std::vector<std::string>& names) {
    std::vector<Technique> out;
    for (const auto& n : names) {
        auto t = parse_technique(n);
        if (!t) throw UsageError("unknown technique '" + n + "'");
        if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
    return out;
}

std::vector<MatchMode> parse_modes(const std::vector<std::string>& names) {
    std::vector<MatchMode> out;
    for (const auto& n : names) {
        auto m = parse_mode(n);
        if (!m) throw UsageError("unknown mode '" + n + "'");
        if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    if (out.empty()) out = {MatchMode::Syntactic, MatchMode::Semantic};
    return out;
}

std::string fmt(const char* pattern, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void write_tables(const fs::path& dir, const std::map<std::string, std::string>& tables) {
    for (const auto& [name, text] : tables) write_file(dir / name, text);
}

void print_validity(std::ostream& out, const std::vector<ValidityRow>& rows) {
    out << "model\ttechnique\tvalid\tregex\tinvalid\tempty\ttotal\tvalid%\n";
    for (const auto& r : rows) {
        out << r.model_id << '\t' << to_string(r.technique) << '\t' << r.valid << '\t' << r.regex << '\t' << r.invalid
            << '\t' << r.empty << '\t' << r.total << '\t' << fmt("%.1f", r.valid_pct) << '\n';
    }
}

int cmd_annotate(const fs::path& corpus, const std::optional<fs::path>& names, const fs::path& out_path,
                 std::optional<fs::path> skips_path, std::ostream& out) {
    auto dataset = annotate_corpus(read_corpus(corpus, names));
    if (!skips_path) {
        skips_path = out_path;
        skips_path->replace_extension(".skips.jsonl");
    }
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_file(out_path, dataset_jsonl(dataset.records));
    write_file(*skips_path, skips_jsonl(dataset.skips));
    out << "annotated " << dataset.records.size() << " entries, skipped " << dataset.skips.size() << "\n";
    return kExitOk;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
    std::vector<DatasetRecord> records;
    if (config.reference) {
        records = read_dataset(*config.reference);
    } else if (config.corpus) {
        records = annotate_corpus(read_corpus(*config.corpus, config.names)).records;
    } else {
        throw UsageError("run needs --reference or --corpus");
    }
    auto data = default_data_dir();
    auto templates = TemplateLibrary::load(config.templates.value_or(data / "prompts"));
    auto bank = load_example_bank(config.examples.value_or(data / "example_bank.jsonl"));

    auto configs = config.providers;
    if (configs.empty()) {
        ProviderConfig oracle;
        oracle.model_id = "oracle";
        configs.push_back(oracle);
    }
    std::vector<std::unique_ptr<CompletionProvider>> owned;
    std::vector<std::pair<ProviderConfig, CompletionProvider*>> providers;
    for (const auto& c : configs) {
        owned.push_back(make_provider(c));
        providers.emplace_back(c, owned.back().get());
    }
    auto techniques = config.techniques.value_or(
        std::vector<Technique>(technique_matrix().begin(), technique_matrix().end()));
    auto summary = run_matrix(providers, techniques, records, templates, bank, {config.out_dir, config.parallelism});
    for (const auto& c : summary.combos) {
        out << c.model_id << '\t' << to_string(c.technique) << '\t' << c.status << '\t' << c.entries << " entries";
        if (c.errors) out << ", " << c.errors << " errors";
        if (!c.note.empty()) out << " (" << c.note << ")";
        out << '\n';
    }
    out << "manifest: " << summary.manifest.string() << '\n';
    return kExitOk;
}

int cmd_validate(const fs::path& results, const std::optional<fs::path>& csv_out, std::ostream& out) {
    auto rows = validity_table(read_result_dir(results));
    print_validity(out, rows);
    if (csv_out) {
        AggregateReport r;
        r.validity = rows;
        write_file(*csv_out, report_to_csv(r).at("validity.csv"));
    }
    return kExitOk;
}

int cmd_evaluate(const fs::path& results, const fs::path& reference, const std::vector<MatchMode>& modes,
                 const fs::path& out_path, const std::string& format, std::ostream& out) {
    ReferenceDataset ref{read_dataset(reference), {}};
    auto report = build_report(read_result_dir(results), ref, modes);
    if (format == "csv") {
        fs::create_directories(out_path);
        write_tables(out_path, report_to_csv(report));
    } else {
        if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
        write_file(out_path, report_to_json(report));
    }
    out << "model\ttechnique\tmode\tprecision\trecall\tf1\n";
    for (const auto& c : report.combos) {
        out << c.model_id << '\t' << to_string(c.technique) << '\t' << to_string(c.mode) << '\t'
            << fmt("%.4f", c.metrics.precision) << '\t' << fmt("%.4f", c.metrics.recall) << '\t'
            << fmt("%.4f", c.metrics.f1) << '\n';
    }
    return kExitOk;
}

AggregateReport load_reports(const fs::path& path) {
    if (fs::is_regular_file(path)) return report_from_json(read_file(path));
    if (!fs::is_directory(path)) throw DataError("no report at " + path.string());
    if (fs::exists(path / "combos.csv")) {
        std::map<std::string, std::string> tables;
        for (const char* name : {"combos.csv", "validity.csv", "predicates.csv", "confusions.csv"}) {
            if (fs::exists(path / name)) tables[name] = read_file(path / name);
        }
        return report_from_csv(tables);
    }
    std::vector<fs::path> files;
    for (const auto& item : fs::directory_iterator(path)) {
        const auto& p = item.path();
        if (item.is_regular_file() && p.extension() == ".json" && p.filename() != "manifest.json") files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    std::vector<AggregateReport> reports;
    for (const auto& f : files) reports.push_back(report_from_json(read_file(f)));
    return merge_reports(reports);
}

int cmd_report(const fs::path& reports, const std::vector<std::string>& formats, const fs::path& out_dir,
               std::ostream& out) {
    auto report = load_reports(reports);
    fs::create_directories(out_dir);
    std::set<MatchMode> modes;
    for (const auto& c : report.combos) modes.insert(c.mode);
    for (const auto& f : formats) {
        if (f == "json") {
            write_file(out_dir / "report.json", report_to_json(report));
        } else if (f == "csv") {
            write_tables(out_dir, report_to_csv(report));
            write_tables(out_dir, ranking_csv(report));
        } else if (f == "svg") {
            for (auto m : modes) {
                auto g = heatmap_grid(report, m);
                auto stem = "heatmap_" + std::string(to_string(m));
                write_file(out_dir / (stem + ".csv"), heatmap_csv(g));
                write_file(out_dir / (stem + ".svg"), heatmap_svg(g));
            }
        }
    }
    for (auto m : modes) {
        out << "technique ranking (" << to_string(m) << ")\n";
        std::size_t rank = 0;
        for (const auto& t : technique_ranking(report, m)) {
            out << ++rank << '\t' << to_string(t.technique) << '\t' << fmt("%.4f", t.mean_f1) << '\n';
        }
    }
    return kExitOk;
}

std::vector<const char*> make_argv(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"logkg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return argv;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
    static const std::vector<std::string> kKeys{"corpus", "names", "reference", "providers", "techniques", "modes",
                                                "out",    "parallelism", "templates", "examples"};
    RunConfig c;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw DataError(path.string() + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw DataError(path.string() + ": unknown key '" + key + "'");
        }
    }
    auto base = path.parent_path();
    auto resolve = [&](const char* key) -> std::optional<fs::path> {
        if (!j.contains(key)) return std::nullopt;
        fs::path p = j.at(key).get<std::string>();
        return p.is_absolute() ? p : base / p;
    };
    try {
        c.corpus = resolve("corpus");
        c.names = resolve("names");
        c.reference = resolve("reference");
        c.templates = resolve("templates");
        c.examples = resolve("examples");
        if (auto out = resolve("out")) c.out_dir = *out;
        c.parallelism = j.value("parallelism", std::size_t{1});
        for (const auto& p : j.value("providers", nlohmann::json::array())) {
            auto pc = provider_from_json(p);
            if (pc.kind == ProviderKind::Replay && pc.replay_path.is_relative()) pc.replay_path = base / pc.replay_path;
            c.providers.push_back(std::move(pc));
        }
        if (j.contains("techniques")) {
            std::vector<Technique> ts;
            for (const auto& name : j.at("techniques").get<std::vector<std::string>>()) {
                auto t = parse_technique(name);
                if (!t) throw DataError(path.string() + ": unknown technique '" + name + "'");
                ts.push_back(*t);
            }
            c.techniques = std::move(ts);
        }
        for (const auto& name : j.value("modes", std::vector<std::string>{})) {
            auto m = parse_mode(name);
            if (!m) throw DataError(path.string() + ": unknown mode '" + name + "'");
            c.modes.push_back(*m);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    for (const auto& p : {c.corpus, c.names, c.reference, c.templates, c.examples}) {
        if (p) require_existing(*p, "configured path");
    }
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Log to knowledge-graph toolkit: annotate, run prompts, validate and score."};
    app.require_subcommand(1);

    std::string corpus, names, out_path, skips;
    auto* annotate = app.add_subcommand("annotate", "Build the reference dataset from a log corpus");
    annotate->add_option("--corpus", corpus, "Log file, one entry per line")->required();
    annotate->add_option("--names", names, "Sidecar of 'START-END<TAB>log_record' ranges");
    annotate->add_option("--out", out_path, "Dataset JSON Lines to write")->required();
    annotate->add_option("--skips", skips, "Skip report path (default: <out>.skips.jsonl)");

    std::string config_path, reference, run_out, templates, examples;
    std::vector<std::string> techniques;
    std::size_t parallelism = 0;
    auto* run = app.add_subcommand("run", "Prompt every provider with every technique");
    run->add_option("--config", config_path, "JSON run config; flags override it");
    run->add_option("--reference", reference, "Reference dataset supplying entries");
    run->add_option("--corpus", corpus, "Log corpus, annotated on the fly when no reference is given");
    run->add_option("--names", names, "Sidecar of log_record ranges for --corpus");
    run->add_option("--technique", techniques, "Technique tag, repeatable (default: all ten)");
    run->add_option("--out", run_out, "Directory for result files and manifest.json");
    run->add_option("--parallelism", parallelism, "Concurrent requests per combination");
    run->add_option("--templates", templates, "Prompt template directory");
    run->add_option("--examples", examples, "Example bank JSON Lines");

    std::string results, validate_out;
    auto* validate = app.add_subcommand("validate", "Tally validation outcomes of result files");
    validate->add_option("--results", results, "Directory of result files")->required();
    validate->add_option("--out", validate_out, "Optional CSV output");

    std::vector<std::string> modes;
    std::string evaluate_out, evaluate_format = "json";
    auto* evaluate = app.add_subcommand("evaluate", "Score result files against the reference");
    evaluate->add_option("--results", results, "Directory of result files")->required();
    evaluate->add_option("--reference", reference, "Reference dataset")->required();
    evaluate->add_option("--mode", modes, "syntactic or semantic, repeatable (default: both)");
    evaluate->add_option("--out", evaluate_out, "Report JSON file, or directory for csv")->required();
    evaluate->add_option("--format", evaluate_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::string reports, report_out;
    std::vector<std::string> formats;
    auto* report = app.add_subcommand("report", "Merge reports into tables, rankings and heatmaps");
    report->add_option("--reports", reports, "Report JSON file, directory of them, or a CSV table directory")
        ->required();
    report->add_option("--format", formats, "csv, json or svg, repeatable (default: all)")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    report->add_option("--out", report_out, "Output directory")->required();

    std::string schema_out;
    auto* schema = app.add_subcommand("schema", "Print the predicate vocabulary as JSON");
    schema->add_option("--out", schema_out, "Write to a file instead of stdout");

    auto argv = make_argv(args);
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (*annotate) {
            return cmd_annotate(require_existing(corpus, "corpus"),
                                names.empty() ? std::nullopt : std::optional<fs::path>(names), out_path,
                                skips.empty() ? std::nullopt : std::optional<fs::path>(skips), out);
        }
        if (*run) {
            RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
            if (!reference.empty()) {
                config.reference = require_existing(reference, "reference");
                config.corpus.reset();
            }
            if (!corpus.empty()) {
                config.corpus = require_existing(corpus, "corpus");
                if (reference.empty()) config.reference.reset();
            }
            if (!names.empty()) config.names = require_existing(names, "names sidecar");
            if (!techniques.empty()) config.techniques = parse_techniques(techniques);
            if (!run_out.empty()) config.out_dir = run_out;
            if (parallelism > 0) config.parallelism = parallelism;
            if (!templates.empty()) config.templates = require_existing(templates, "template directory");
            if (!examples.empty()) config.examples = require_existing(examples, "example bank");
            return cmd_run(config, out);
        }
        if (*validate) {
            return cmd_validate(results, validate_out.empty() ? std::nullopt : std::optional<fs::path>(validate_out),
                                out);
        }
        if (*evaluate) {
            return cmd_evaluate(results, require_existing(reference, "reference"), parse_modes(modes), evaluate_out,
                                evaluate_format, out);
        }
        if (*report) {
            if (formats.empty()) formats = {"csv", "json", "svg"};
            return cmd_report(reports, formats, report_out, out);
        }
        if (*schema) {
            auto text = vocabulary_schema_json();
            if (schema_out.empty()) out << text << '\n';
            else write_file(schema_out, text + "\n");
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace logkg
