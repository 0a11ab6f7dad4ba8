#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fseg::llm {

enum class BackendKind { live, cache, mock };

const char* to_string(BackendKind k);

struct LlmRequest {
    std::string model_id;
    std::string prompt;  // single user message, delivered byte-for-byte
    double temperature = 0.0;
    int max_output_tokens = 2048;
};

struct LlmResponse {
    std::string text;  // raw completion, unmodified
    BackendKind backend = BackendKind::mock;
    std::chrono::milliseconds latency{0};
};

enum class ErrorKind {
    auth,                // non-retryable
    rate_limited,        // retryable
    transport,           // retryable (timeouts, 5xx, connection failures)
    malformed_response,  // non-retryable
    config,              // non-retryable
    empty_completion,
};

class GatewayError : public std::runtime_error {
public:
    GatewayError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    ErrorKind kind;
    bool retryable() const {
        return kind == ErrorKind::rate_limited || kind == ErrorKind::transport;
    }
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual LlmResponse complete(const LlmRequest& req) = 0;
    virtual const char* name() const = 0;
};

// Deterministic offline stand-in for a hosted model. Resolution order:
//   1. completion registered for the exact prompt,
//   2. completion registered for the prompt's sha256,
//   3. completion registered for ("[[founder:<id>]]" tag found in the prompt,
//      detected pipeline stage),
//   4. synthesized completion derived from a hash of the prompt (stable
//      across runs and platforms). Synthesis can be disabled for strict
//      fixture tests, in which case unresolved prompts throw.
class MockBackend final : public Backend {
public:
    LlmResponse complete(const LlmRequest& req) override;
    const char* name() const override { return "mock"; }

    void add_prompt(std::string prompt, std::string completion);
    void add_prompt_sha(std::string sha_hex, std::string completion);
    void add_keyed(std::string founder_key, std::string stage, std::string completion);

    // JSON file: {"by_prompt": {...}, "by_prompt_sha256": {...},
    //             "by_key": {"<founder>/<stage>": ...}}
    void load_fixture_file(const std::filesystem::path& path);

    void set_synthesize(bool on) { synthesize_ = on; }
    int calls() const { return calls_.load(); }

    // stage detection + deterministic synthesis, exposed for tests
    static std::string detect_stage(const std::string& prompt);
    static std::string synthesize_completion(const std::string& stage, const std::string& prompt);

private:
    std::unordered_map<std::string, std::string> by_prompt_;
    std::unordered_map<std::string, std::string> by_sha_;
    std::unordered_map<std::string, std::string> by_key_;
    bool synthesize_ = true;
    std::atomic<int> calls_{0};
    std::mutex mu_;
};

struct HttpBackendConfig {
    std::string endpoint_url;  // full URL of the chat-completion endpoint
    std::string api_key;       // bearer credential
    std::chrono::milliseconds connect_timeout{5000};
    std::chrono::milliseconds read_timeout{120000};
};

// Chat-completion client speaking the de-facto hosted-LLM wire format:
// POST {url} with {"model", "messages":[{"role":"user","content"}],
// "temperature", "max_tokens"}; completion read from
// choices[0].message.content.
std::unique_ptr<Backend> make_http_backend(HttpBackendConfig config);

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{1000};
    double multiplier = 2.0;
};

// Append-only JSONL store keyed by sha256(model_id, temperature, prompt).
// I/O failures degrade to warnings; the store then behaves as empty.
class CacheStore {
public:
    explicit CacheStore(std::filesystem::path path);

    static std::string request_key(const LlmRequest& req);

    std::optional<std::string> lookup(const std::string& key);
    bool insert(const std::string& key, const std::string& response_text);

    std::size_t size();
    bool healthy() const { return healthy_; }
    const std::filesystem::path& path() const { return path_; }

private:
    void warn(const std::string& msg);

    std::filesystem::path path_;
    std::unordered_map<std::string, std::string> entries_;
    bool healthy_ = true;
    bool warned_ = false;
    std::mutex mu_;
};

// Retry + concurrency-bound front door; every prompt in the pipeline flows
// through one of these.
class LlmGateway {
public:
    LlmGateway(std::unique_ptr<Backend> backend, RetryPolicy retry = {}, int max_inflight = 4);

    LlmResponse complete(const LlmRequest& req);
    LlmResponse cached_complete(const LlmRequest& req, CacheStore& store);

    Backend& backend() { return *backend_; }

    // test hook: replaces the real sleep between retries
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper);

private:
    std::unique_ptr<Backend> backend_;
    RetryPolicy retry_;
    std::counting_semaphore<> slots_;
    std::function<void(std::chrono::milliseconds)> sleeper_;
};

}  // namespace fseg::llm
