#include "logkg/llm_runner.hpp"

#include "logkg/dataset.hpp"
#include "logkg/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include <openssl/evp.h>

namespace logkg {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::map<std::uint64_t, std::string> read_replay_file(const std::filesystem::path& path) {
    std::map<std::uint64_t, std::string> out;
    auto text = read_file(path);
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        auto line = std::string_view(text).substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        ++number;
        if (!trim(line).empty()) {
            try {
                auto j = nlohmann::json::parse(line);
                out[j.at("id").get<std::uint64_t>()] = j.at("raw").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw DataError(path.string() + ":" + std::to_string(number) + ": " + e.what());
            }
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return out;
}

// Splits "<model>__<TAG>.jsonl".
std::optional<std::pair<std::string, Technique>> split_result_name(const std::string& name) {
    if (!name.ends_with(".jsonl")) return std::nullopt;
    auto stem = name.substr(0, name.size() - 6);
    auto cut = stem.rfind("__");
    if (cut == std::string::npos || cut == 0) return std::nullopt;
    auto t = parse_technique(stem.substr(cut + 2));
    if (!t || to_string(*t) != stem.substr(cut + 2)) return std::nullopt;
    return std::pair{stem.substr(0, cut), *t};
}

std::string complete_with_retry(CompletionProvider& provider, const CompletionRequest& request) {
    try {
        return provider.complete(request);
    } catch (const ProviderError& e) {
        if (!e.transient()) throw;
    }
    return provider.complete(request);
}

}  // namespace

std::string_view to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::RemoteChat: return "remote_chat";
        case ProviderKind::Replay: return "replay";
        case ProviderKind::Oracle: return "oracle";
    }
    return "?";
}

ProviderConfig provider_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> kKeys{"kind",    "model_id",    "endpoint",      "max_tokens",
                                                "temperature", "stop",    "replay_path",   "timeout_ms",
                                                "system_prompt", "api_key_env"};
    if (!j.is_object()) throw DataError("provider entry must be an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw DataError("unknown provider key '" + key + "'");
        }
    }
    ProviderConfig c;
    try {
        auto kind = j.at("kind").get<std::string>();
        if (kind == "oracle") c.kind = ProviderKind::Oracle;
        else if (kind == "replay") c.kind = ProviderKind::Replay;
        else if (kind == "remote_chat") c.kind = ProviderKind::RemoteChat;
        else throw DataError("unknown provider kind '" + kind + "'");
        c.model_id = j.value("model_id", c.kind == ProviderKind::Oracle ? std::string("oracle") : std::string());
        c.endpoint = j.value("endpoint", std::string());
        c.generation.max_tokens = j.value("max_tokens", c.generation.max_tokens);
        c.generation.temperature = j.value("temperature", c.generation.temperature);
        c.generation.stop = j.value("stop", std::vector<std::string>{});
        c.replay_path = j.value("replay_path", std::string());
        c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
        c.system_prompt = j.value("system_prompt", std::string());
        c.api_key_env = j.value("api_key_env", c.api_key_env);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("provider config: ") + e.what());
    }
    if (c.model_id.empty()) throw DataError("provider config: model_id is required");
    if (c.kind == ProviderKind::RemoteChat && c.endpoint.empty()) {
        throw DataError("provider config: remote_chat needs an endpoint");
    }
    if (c.kind == ProviderKind::Replay && c.replay_path.empty()) {
        throw DataError("provider config: replay needs replay_path");
    }
    return c;
}

nlohmann::ordered_json provider_to_json(const ProviderConfig& c) {
    ojson j;
    j["kind"] = to_string(c.kind);
    j["model_id"] = c.model_id;
    if (c.kind == ProviderKind::RemoteChat) {
        j["endpoint"] = c.endpoint;
        j["max_tokens"] = c.generation.max_tokens;
        j["temperature"] = c.generation.temperature;
        j["stop"] = c.generation.stop;
        j["timeout_ms"] = c.timeout_ms;
        j["system_prompt"] = c.system_prompt;
        j["api_key_env"] = c.api_key_env;
    }
    if (c.kind == ProviderKind::Replay) j["replay_path"] = c.replay_path.generic_string();
    return j;
}

std::string OracleProvider::complete(const CompletionRequest& request) {
    try {
        return serialize(annotate(parse_entry(request.entry), request.seq));
    } catch (const MalformedHeader& e) {
        throw ProviderError(e.what(), false);
    }
}

ReplayProvider::ReplayProvider(std::string model_id, std::filesystem::path path)
    : model_id_(std::move(model_id)), path_(std::move(path)) {
    if (std::filesystem::is_directory(path_)) {
        auto want = sanitize_model_id(model_id_);
        for (const auto& item : std::filesystem::directory_iterator(path_)) {
            auto parts = split_result_name(item.path().filename().string());
            if (parts && parts->first == want) per_technique_[parts->second] = read_replay_file(item.path());
        }
        if (per_technique_.empty()) {
            throw DataError("no replay files for model '" + model_id_ + "' in " + path_.string());
        }
    } else {
        shared_ = read_replay_file(path_);
    }
}

std::string ReplayProvider::complete(const CompletionRequest& request) {
    const std::map<std::uint64_t, std::string>* table = &shared_;
    if (!per_technique_.empty()) {
        auto it = per_technique_.find(request.technique);
        if (it == per_technique_.end()) {
            throw ProviderError("no replay file for " + std::string(to_string(request.technique)), false);
        }
        table = &it->second;
    }
    auto it = table->find(request.entry.entry_id);
    if (it == table->end()) throw ProviderError("no replay answer for id " + std::to_string(request.entry.entry_id), false);
    return it->second;
}

RemoteChatProvider::RemoteChatProvider(ProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (!transport_) transport_ = make_http_transport();
}

std::string RemoteChatProvider::request_body(const std::string& prompt) const {
    ojson j;
    j["model"] = config_.model_id;
    j["messages"] = ojson::array();
    if (!config_.system_prompt.empty()) {
        j["messages"].push_back({{"role", "system"}, {"content", config_.system_prompt}});
    }
    j["messages"].push_back({{"role", "user"}, {"content", prompt}});
    j["temperature"] = config_.generation.temperature;
    j["max_tokens"] = config_.generation.max_tokens;
    if (!config_.generation.stop.empty()) j["stop"] = config_.generation.stop;
    return j.dump();
}

std::string RemoteChatProvider::complete(const CompletionRequest& request) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
        headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
    auto response = transport_->post_json(config_.endpoint, request_body(request.prompt), headers,
                                          std::chrono::milliseconds(config_.timeout_ms));
    if (response.status == 429 || response.status >= 500) {
        throw ProviderError("HTTP " + std::to_string(response.status), true);
    }
    if (response.status != 200) throw ProviderError("HTTP " + std::to_string(response.status), false);
    try {
        auto j = nlohmann::json::parse(response.body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed completion response: ") + e.what(), false);
    }
}

std::unique_ptr<CompletionProvider> make_provider(const ProviderConfig& config, std::shared_ptr<HttpTransport> transport) {
    switch (config.kind) {
        case ProviderKind::Oracle: return std::make_unique<OracleProvider>(config.model_id);
        case ProviderKind::Replay: return std::make_unique<ReplayProvider>(config.model_id, config.replay_path);
        case ProviderKind::RemoteChat: return std::make_unique<RemoteChatProvider>(config, std::move(transport));
    }
    throw DataError("unknown provider kind");
}

RunResult run_entry(CompletionProvider& provider, const TemplateLibrary& templates, Technique technique,
                    const DatasetRecord& record, const ExampleBank& bank) {
    RawLogEntry entry{record.entry_id, record.log_record, record.log};
    auto prompt = templates.build_prompt(technique, record.log, bank);
    RunResult r;
    r.entry_id = record.entry_id;
    r.technique = technique;
    r.model_id = provider.model_id();
    auto started = std::chrono::steady_clock::now();
    try {
        r.raw = complete_with_retry(provider, {entry, record.seq, technique, prompt});
        auto v = classify(r.raw);
        r.cleaned = std::move(v.cleaned);
        r.outcome = v.tag;
    } catch (const ProviderError& e) {
        r.raw.clear();
        r.outcome = Outcome::Invalid;
        r.error = e.what();
    }
    if (!provider.deterministic()) {
        r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    }
    return r;
}

std::string sanitize_model_id(std::string_view model_id) {
    std::string out;
    for (char c : model_id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
        out += ok ? c : '_';
    }
    // A "__" inside the model part would make the file name ambiguous.
    std::string collapsed;
    for (char c : out) {
        if (c == '_' && !collapsed.empty() && collapsed.back() == '_') continue;
        collapsed += c;
    }
    return collapsed.empty() ? "model" : collapsed;
}

std::string result_file_name(std::string_view model_id, Technique t) {
    return sanitize_model_id(model_id) + "__" + std::string(to_string(t)) + ".jsonl";
}

std::string results_jsonl(const std::vector<RunResult>& results) {
    std::string out;
    for (const auto& r : results) {
        ojson j;
        j["id"] = r.entry_id;
        j["raw"] = r.raw;
        j["cleaned"] = r.cleaned;
        j["outcome"] = to_string(r.outcome);
        j["latency_ms"] = r.latency_ms;
        if (!r.error.empty()) j["error"] = r.error;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<RunResult> parse_results(std::string_view text, const std::string& model_id, Technique t) {
    std::vector<RunResult> out;
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++number;
        if (!trim(line).empty()) {
            try {
                auto j = nlohmann::json::parse(line);
                RunResult r;
                r.entry_id = j.at("id").get<std::uint64_t>();
                r.technique = t;
                r.model_id = model_id;
                r.raw = j.at("raw").get<std::string>();
                r.latency_ms = j.value("latency_ms", std::int64_t{0});
                r.error = j.value("error", std::string());
                if (j.contains("outcome")) {
                    auto o = parse_outcome(j.at("outcome").get<std::string>());
                    if (!o) throw DataError("result line " + std::to_string(number) + ": unknown outcome");
                    r.outcome = *o;
                    r.cleaned = j.value("cleaned", std::string());
                } else {
                    auto v = classify(r.raw);
                    r.outcome = v.tag;
                    r.cleaned = std::move(v.cleaned);
                }
                out.push_back(std::move(r));
            } catch (const nlohmann::json::exception& e) {
                throw DataError("result line " + std::to_string(number) + ": " + e.what());
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

std::vector<ResultFile> read_result_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<ResultFile> out;
    for (const auto& item : std::filesystem::directory_iterator(dir)) {
        if (!item.is_regular_file()) continue;
        auto parts = split_result_name(item.path().filename().string());
        if (!parts) continue;
        ResultFile f{parts->first, parts->second, item.path(), {}};
        try {
            f.results = parse_results(read_file(item.path()), f.model_id, f.technique);
        } catch (const DataError& e) {
            throw DataError(item.path().string() + ": " + e.what());
        }
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.model_id, a.technique) < std::tie(b.model_id, b.technique);
    });
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

MatrixSummary run_matrix(const std::vector<std::pair<ProviderConfig, CompletionProvider*>>& providers,
                         const std::vector<Technique>& techniques, const std::vector<DatasetRecord>& records,
                         const TemplateLibrary& templates, const ExampleBank& bank, const RunOptions& options) {
    MatrixSummary summary;
    std::filesystem::create_directories(options.out_dir);
    const std::size_t workers = std::max<std::size_t>(1, options.parallelism);

    for (const auto& [config, provider] : providers) {
        for (auto technique : techniques) {
            ComboStatus status;
            status.model_id = provider->model_id();
            status.technique = technique;
            status.file = result_file_name(status.model_id, technique);
            try {
                // Surfaces MissingExamples before any request is made.
                if (!records.empty()) templates.build_prompt(technique, records.front().log, bank);
            } catch (const MissingExamples& e) {
                status.status = "failed";
                status.note = e.what();
                summary.combos.push_back(std::move(status));
                continue;
            }

            std::vector<RunResult> results(records.size());
            std::atomic<std::size_t> next{0};
            {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < std::min(workers, records.size()); ++w) {
                    pool.emplace_back([&] {
                        for (auto i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) {
                            results[i] = run_entry(*provider, templates, technique, records[i], bank);
                        }
                    });
                }
            }
            std::stable_sort(results.begin(), results.end(),
                             [](const auto& a, const auto& b) { return a.entry_id < b.entry_id; });
            write_file(options.out_dir / status.file, results_jsonl(results));

            status.entries = results.size();
            for (const auto& r : results) {
                ++status.outcomes[r.outcome];
                if (!r.error.empty()) ++status.errors;
            }
            status.status = status.errors == 0 ? "complete" : "partial";
            summary.combos.push_back(std::move(status));
        }
    }

    std::string corpus;
    for (const auto& r : records) {
        corpus += r.log;
        corpus += '\n';
    }
    ojson manifest;
    manifest["corpus_sha256"] = sha256_hex(corpus);
    manifest["entries"] = records.size();
    ojson template_hashes = ojson::object();
    for (auto t : technique_matrix()) template_hashes[std::string(to_string(t))] = sha256_hex(templates.source(t));
    manifest["template_sha256s"] = std::move(template_hashes);
    std::string bank_text;
    for (const auto& e : bank.examples) bank_text += e.log_line + '\n' + e.ttl + '\n';
    manifest["example_bank_sha256"] = sha256_hex(bank_text);
    manifest["providers"] = ojson::array();
    for (const auto& [config, provider] : providers) manifest["providers"].push_back(provider_to_json(config));
    manifest["combos"] = ojson::array();
    for (const auto& c : summary.combos) {
        ojson j;
        j["model_id"] = c.model_id;
        j["technique"] = to_string(c.technique);
        j["file"] = c.file;
        j["status"] = c.status;
        if (!c.note.empty()) j["note"] = c.note;
        j["entries"] = c.entries;
        j["errors"] = c.errors;
        ojson counts;
        for (auto o : {Outcome::Valid, Outcome::Regex, Outcome::Invalid, Outcome::Empty}) {
            auto it = c.outcomes.find(o);
            counts[std::string(to_string(o))] = it == c.outcomes.end() ? 0 : it->second;
        }
        j["outcomes"] = std::move(counts);
        manifest["combos"].push_back(std::move(j));
    }
    summary.manifest = options.out_dir / "manifest.json";
    write_file(summary.manifest, manifest.dump(2) + "\n");
    return summary;
}

}  // namespace logkg
