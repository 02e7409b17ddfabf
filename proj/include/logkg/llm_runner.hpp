#pragma once

#include "logkg/annotator.hpp"
#include "logkg/prompt_kit.hpp"
#include "logkg/turtle.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace logkg {

enum class ProviderKind : std::uint8_t { RemoteChat, Replay, Oracle };

std::string_view to_string(ProviderKind k);  // "remote_chat", "replay", "oracle"

struct GenerationParams {
    int max_tokens = 4096;
    double temperature = 0.0;
    std::vector<std::string> stop;
};

struct ProviderConfig {
    ProviderKind kind = ProviderKind::Oracle;
    std::string model_id;  // defaults to "oracle" for the oracle provider
    std::string endpoint;  // RemoteChat: full chat-completions URL
    GenerationParams generation;
    std::filesystem::path replay_path;  // Replay: a results file or a directory of them
    int timeout_ms = 120000;
    std::string system_prompt;
    std::string api_key_env = "LOGKG_API_KEY";
};

/// Reads one provider object of the run config. Throws DataError on unknown
/// keys, bad kinds or missing required fields.
ProviderConfig provider_from_json(const nlohmann::json& j);
/// The config as recorded in the manifest (never includes credentials).
nlohmann::ordered_json provider_to_json(const ProviderConfig& c);

struct CompletionRequest {
    const RawLogEntry& entry;
    std::uint64_t seq;
    Technique technique;
    const std::string& prompt;
};

class CompletionProvider {
public:
    virtual ~CompletionProvider() = default;
    virtual const std::string& model_id() const = 0;
    /// Deterministic providers give identical output for identical requests;
    /// their latency is recorded as 0 so result files are reproducible.
    virtual bool deterministic() const = 0;
    /// Safe to call concurrently. Throws ProviderError.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Returns the annotator's canonical Turtle for the entry, ignoring the prompt.
class OracleProvider : public CompletionProvider {
public:
    explicit OracleProvider(std::string model_id = "oracle") : model_id_(std::move(model_id)) {}
    const std::string& model_id() const override { return model_id_; }
    bool deterministic() const override { return true; }
    std::string complete(const CompletionRequest& request) override;

private:
    std::string model_id_;
};

/// Serves stored completions keyed by entry id. `path` is either one JSONL file
/// with {"id", "raw"} lines used for every technique, or a directory of
/// "<model>__<TAG>.jsonl" files.
class ReplayProvider : public CompletionProvider {
public:
    ReplayProvider(std::string model_id, std::filesystem::path path);
    const std::string& model_id() const override { return model_id_; }
    bool deterministic() const override { return true; }
    std::string complete(const CompletionRequest& request) override;

private:
    std::string model_id_;
    std::filesystem::path path_;
    std::map<std::uint64_t, std::string> shared_;
    std::map<Technique, std::map<std::uint64_t, std::string>> per_technique_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Throws ProviderError (transient) when no response arrives.
    virtual HttpResponse post_json(const std::string& url, const std::string& body,
                                   const std::vector<std::pair<std::string, std::string>>& headers,
                                   std::chrono::milliseconds timeout) = 0;
};

/// cpp-httplib backed transport; supports http:// and https:// URLs.
std::unique_ptr<HttpTransport> make_http_transport();

/// OpenAI-style chat completions: system + user message in, first choice's
/// message content out. 429 and 5xx are transient failures.
class RemoteChatProvider : public CompletionProvider {
public:
    RemoteChatProvider(ProviderConfig config, std::shared_ptr<HttpTransport> transport);
    const std::string& model_id() const override { return config_.model_id; }
    bool deterministic() const override { return false; }
    std::string complete(const CompletionRequest& request) override;

    /// The JSON body sent for one prompt.
    std::string request_body(const std::string& prompt) const;

private:
    ProviderConfig config_;
    std::shared_ptr<HttpTransport> transport_;
};

std::unique_ptr<CompletionProvider> make_provider(const ProviderConfig& config,
                                                  std::shared_ptr<HttpTransport> transport = nullptr);

struct RunResult {
    std::uint64_t entry_id = 0;
    Technique technique{};
    std::string model_id;
    std::string raw;
    std::string cleaned;
    Outcome outcome = Outcome::Empty;
    std::int64_t latency_ms = 0;
    std::string error;  // provider failure note, empty on success

    bool operator==(const RunResult&) const = default;
};

/// Builds the prompt, asks the provider (retrying once on a transient error)
/// and classifies the answer. Provider failures become Invalid results.
RunResult run_entry(CompletionProvider& provider, const TemplateLibrary& templates, Technique technique,
                    const DatasetRecord& record, const ExampleBank& bank);

/// "<model>__<TAG>.jsonl" with unsafe characters of the model id replaced.
std::string result_file_name(std::string_view model_id, Technique t);
std::string sanitize_model_id(std::string_view model_id);

std::string results_jsonl(const std::vector<RunResult>& results);
/// Parses one result file; model and technique come from the caller.
std::vector<RunResult> parse_results(std::string_view text, const std::string& model_id, Technique t);

struct ResultFile {
    std::string model_id;  // as written in the file name
    Technique technique{};
    std::filesystem::path path;
    std::vector<RunResult> results;
};

/// Every "<model>__<TAG>.jsonl" file of a directory, sorted by model then
/// technique order. Other files are ignored. Throws DataError.
std::vector<ResultFile> read_result_dir(const std::filesystem::path& dir);

struct RunOptions {
    std::filesystem::path out_dir;
    std::size_t parallelism = 1;
};

struct ComboStatus {
    std::string model_id;
    Technique technique{};
    std::string file;
    std::string status;  // "complete", "partial" (some provider errors) or "failed"
    std::string note;
    std::size_t entries = 0;
    std::size_t errors = 0;
    std::map<Outcome, std::size_t> outcomes;
};

struct MatrixSummary {
    std::vector<ComboStatus> combos;
    std::filesystem::path manifest;
};

/// Runs every provider x technique over the records and writes one result
/// file per combination plus manifest.json into options.out_dir.
MatrixSummary run_matrix(const std::vector<std::pair<ProviderConfig, CompletionProvider*>>& providers,
                         const std::vector<Technique>& techniques, const std::vector<DatasetRecord>& records,
                         const TemplateLibrary& templates, const ExampleBank& bank, const RunOptions& options);

std::string sha256_hex(std::string_view data);

}  // namespace logkg
