#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "fseg/llm_gateway.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "fseg/hash.hpp"

namespace fseg::llm {

using nlohmann::json;

const char* to_string(BackendKind k) {
    switch (k) {
        case BackendKind::live: return "live";
        case BackendKind::cache: return "cache";
        case BackendKind::mock: return "mock";
    }
    return "?";
}

// ---------------------------------------------------------------- mock

namespace {

std::string founder_tag(const std::string& prompt) {
    static const std::regex re(R"(\[\[founder:([^\]]+)\]\])");
    std::smatch m;
    if (std::regex_search(prompt, m, re)) return m[1].str();
    return {};
}

std::string pick_university(std::uint64_t h) {
    static const char* unis[] = {
        "Stanford University", "Duke University", "University of Michigan",
        "Carnegie Mellon University", "University of Texas at Austin",
        "Georgia Institute of Technology", "University of Washington",
        "Boston University", "Purdue University", "State Technical College",
    };
    return unis[h % 10];
}

}  // namespace

std::string MockBackend::detect_stage(const std::string& prompt) {
    if (prompt.find("generate a detailed and accurate summary") != std::string::npos) return "summary";
    if (prompt.find("propose") != std::string::npos && prompt.find("categories") != std::string::npos)
        return "taxonomy";
    if (prompt.find("committee of 3 experienced Venture Capital") != std::string::npos) return "level";
    if (prompt.find("classification of personas") != std::string::npos) return "personas";
    if (prompt.find("boolean variables") != std::string::npos) return "flags";
    return "unknown";
}

std::string MockBackend::synthesize_completion(const std::string& stage, const std::string& prompt) {
    std::uint64_t h = fnv1a64(prompt);
    std::ostringstream out;

    if (stage == "summary") {
        std::string name = "the founder";
        std::smatch m;
        static const std::regex name_re("\"name\"\\s*:\\s*\"([^\"]*)\"");
        if (std::regex_search(prompt, m, name_re)) name = m[1].str();
        std::string org = "their company";
        static const std::regex org_re("latest founded company of this individual is (.*)\\.");
        if (std::regex_search(prompt, m, org_re)) org = m[1].str();
        std::string tag = founder_tag(prompt);

        std::uint64_t h2 = mix64(h);
        double years = static_cast<double>(h2 % 240) / 10.0;
        int rank = static_cast<int>(h2 % 180) + 1;
        bool ranked = (h2 >> 8) % 4 != 0;
        bool prior_co = (h2 >> 16) % 3 == 0;
        std::string uni = pick_university(h2 >> 24);

        out << name << (tag.empty() ? "" : " [[founder:" + tag + "]]")
            << ", currently residing in the United States. Their latest founded company is " << org
            << ", which they started after " << static_cast<int>(years) << "+ years in industry. "
            << "They studied at " << uni
            << " and held engineering and product roles before founding " << org << ".\n\n"
            << "1) The universities where the founder studied, along with their global rankings "
               "according to the latest QS World University Rankings (university, #ranking):\n"
            << "   " << uni << ", #" << (ranked ? std::to_string(rank) : "N/A") << ".\n\n"
            << "2) The total time period of work experience (in years) BEFORE the individual founded "
            << org << ". For this part, add together the employment durations for the jobs stated "
               "earlier:\n"
            << "   " << years << " years.\n\n"
            << "3) The companies founded/co-founded by them BEFORE founding " << org
            << " in the format - company, status, net worth in USD:\n";
        if (prior_co) {
            double worth = static_cast<double>((h2 >> 5) % 900) / 10.0;
            out << "   Priorware, " << ((h2 >> 9) % 2 ? "active" : "closed") << ", " << worth << "M.\n";
        } else {
            out << "   Not available.\n";
        }
        return out.str();
    }

    if (stage == "level") {
        int level = static_cast<int>(h % 10) + 1;
        out << "L" << level;
        return out.str();
    }

    if (stage == "personas") {
        int count = static_cast<int>(h % 3) + 1;
        std::uint64_t h2 = h;
        std::string letters;
        out << "[";
        for (int i = 0; i < count; ++i) {
            h2 = mix64(h2);
            char c = static_cast<char>('A' + h2 % 20);
            if (letters.find(c) != std::string::npos) continue;
            if (!letters.empty()) out << ", ";
            letters.push_back(c);
            out << c;
        }
        out << "]";
        return out.str();
    }

    if (stage == "flags") {
        std::uint64_t bits_lo = mix64(h ^ 0xf1a6);
        std::uint64_t bits_hi = mix64(h ^ 0xf1a7);
        out << "[";
        for (int i = 0; i < 23; ++i) {
            std::uint64_t src = i < 16 ? bits_lo : bits_hi;
            int shift = (i % 16) * 2;
            int v = ((src >> shift) & 0x3) == 0 ? 1 : 0;  // ~25% ones
            if (i) out << ",";
            out << v;
        }
        out << "]";
        return out.str();
    }

    if (stage == "taxonomy") {
        out << "Proposed categories:\n";
        for (int i = 1; i <= 10; ++i) {
            out << i << ". Category " << i << ": founders at tier " << i << " of prior achievement.\n";
        }
        return out.str();
    }

    return "OK";
}

LlmResponse MockBackend::complete(const LlmRequest& req) {
    calls_.fetch_add(1);
    std::lock_guard<std::mutex> lock(mu_);

    auto it = by_prompt_.find(req.prompt);
    if (it != by_prompt_.end()) return {it->second, BackendKind::mock, {}};

    auto sha = sha256_hex(req.prompt);
    it = by_sha_.find(sha);
    if (it != by_sha_.end()) return {it->second, BackendKind::mock, {}};

    std::string stage = detect_stage(req.prompt);
    std::string tag = founder_tag(req.prompt);
    if (!tag.empty()) {
        it = by_key_.find(tag + "/" + stage);
        if (it != by_key_.end()) return {it->second, BackendKind::mock, {}};
    }

    if (!synthesize_) {
        throw GatewayError(ErrorKind::config,
                           "mock backend has no completion for prompt (stage=" + stage + ")");
    }
    return {synthesize_completion(stage, req.prompt), BackendKind::mock, {}};
}

void MockBackend::add_prompt(std::string prompt, std::string completion) {
    std::lock_guard<std::mutex> lock(mu_);
    by_prompt_[std::move(prompt)] = std::move(completion);
}

void MockBackend::add_prompt_sha(std::string sha_hex, std::string completion) {
    std::lock_guard<std::mutex> lock(mu_);
    by_sha_[std::move(sha_hex)] = std::move(completion);
}

void MockBackend::add_keyed(std::string founder_key, std::string stage, std::string completion) {
    std::lock_guard<std::mutex> lock(mu_);
    by_key_[founder_key + "/" + stage] = std::move(completion);
}

void MockBackend::load_fixture_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GatewayError(ErrorKind::config, "cannot open mock fixture file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw GatewayError(ErrorKind::config, "bad mock fixture file " + path.string() + ": " + e.what());
    }
    std::lock_guard<std::mutex> lock(mu_);
    if (j.contains("by_prompt"))
        for (auto& [k, v] : j["by_prompt"].items()) by_prompt_[k] = v.get<std::string>();
    if (j.contains("by_prompt_sha256"))
        for (auto& [k, v] : j["by_prompt_sha256"].items()) by_sha_[k] = v.get<std::string>();
    if (j.contains("by_key"))
        for (auto& [k, v] : j["by_key"].items()) by_key_[k] = v.get<std::string>();
}

// ---------------------------------------------------------------- http

namespace {

class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
        auto pos = config_.endpoint_url.find("://");
        if (pos == std::string::npos) {
            throw GatewayError(ErrorKind::config, "endpoint URL must include a scheme: " + config_.endpoint_url);
        }
        auto path_pos = config_.endpoint_url.find('/', pos + 3);
        if (path_pos == std::string::npos) {
            base_ = config_.endpoint_url;
            path_ = "/";
        } else {
            base_ = config_.endpoint_url.substr(0, path_pos);
            path_ = config_.endpoint_url.substr(path_pos);
        }
    }

    LlmResponse complete(const LlmRequest& req) override {
        httplib::Client cli(base_);
        cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.connect_timeout));
        cli.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.read_timeout));

        json body{{"model", req.model_id},
                  {"messages", json::array({json{{"role", "user"}, {"content", req.prompt}}})},
                  {"temperature", req.temperature},
                  {"max_tokens", req.max_output_tokens}};

        httplib::Headers headers;
        if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

        auto t0 = std::chrono::steady_clock::now();
        httplib::Result res = cli.Post(path_, headers, body.dump(), "application/json");
        auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0);

        if (!res) {
            throw GatewayError(ErrorKind::transport,
                               "request to " + base_ + " failed: " + httplib::to_string(res.error()));
        }
        if (res->status == 401 || res->status == 403) {
            throw GatewayError(ErrorKind::auth, "authentication rejected (" + std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status == 408) {
            throw GatewayError(ErrorKind::rate_limited, "rate limited (" + std::to_string(res->status) + ")");
        }
        if (res->status >= 500) {
            throw GatewayError(ErrorKind::transport, "server error (" + std::to_string(res->status) + ")");
        }
        if (res->status != 200) {
            throw GatewayError(ErrorKind::malformed_response,
                               "unexpected status " + std::to_string(res->status) + ": " + res->body);
        }

        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
            throw GatewayError(ErrorKind::malformed_response, "completion response missing choices");
        }
        const json& msg = parsed["choices"][0];
        if (!msg.contains("message") || !msg["message"].contains("content") ||
            !msg["message"]["content"].is_string()) {
            throw GatewayError(ErrorKind::malformed_response, "completion response missing message content");
        }
        return {msg["message"]["content"].get<std::string>(), BackendKind::live, latency};
    }

    const char* name() const override { return "live"; }

private:
    HttpBackendConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace

std::unique_ptr<Backend> make_http_backend(HttpBackendConfig config) {
    return std::make_unique<HttpBackend>(std::move(config));
}

// ---------------------------------------------------------------- cache

namespace {

std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

CacheStore::CacheStore(std::filesystem::path path) : path_(std::move(path)) {
    try {
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    } catch (const std::exception& e) {
        healthy_ = false;
        warn(std::string("cannot create cache directory: ") + e.what());
        return;
    }
    std::ifstream in(path_);
    if (!in) return;  // no cache yet
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("key") || !j.contains("response_text")) {
            warn("skipping malformed cache line in " + path_.string());
            continue;
        }
        entries_[j["key"].get<std::string>()] = j["response_text"].get<std::string>();
    }
}

std::string CacheStore::request_key(const LlmRequest& req) {
    char temp[64];
    std::snprintf(temp, sizeof temp, "%.10g", req.temperature);
    std::string material = req.model_id;
    material.push_back('\x1f');
    material += temp;
    material.push_back('\x1f');
    material += req.prompt;
    return sha256_hex(material);
}

std::optional<std::string> CacheStore::lookup(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool CacheStore::insert(const std::string& key, const std::string& response_text) {
    std::lock_guard<std::mutex> lock(mu_);
    if (entries_.count(key)) return true;  // already persisted
    if (!healthy_) return false;
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) {
        healthy_ = false;
        warn("cannot append to cache file " + path_.string());
        return false;
    }
    json j{{"key", key}, {"response_text", response_text}, {"created_at", iso_utc_now()}};
    out << j.dump() << '\n';
    if (!out) {
        healthy_ = false;
        warn("write to cache file failed: " + path_.string());
        return false;
    }
    entries_[key] = response_text;
    return true;
}

std::size_t CacheStore::size() {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

void CacheStore::warn(const std::string& msg) {
    if (warned_) return;
    warned_ = true;
    std::fprintf(stderr, "[fseg] warning: %s; continuing without cache persistence\n", msg.c_str());
}

// ---------------------------------------------------------------- gateway

LlmGateway::LlmGateway(std::unique_ptr<Backend> backend, RetryPolicy retry, int max_inflight)
    : backend_(std::move(backend)),
      retry_(retry),
      slots_(max_inflight > 0 ? max_inflight : 1),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

void LlmGateway::set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleeper_ = std::move(sleeper);
}

LlmResponse LlmGateway::complete(const LlmRequest& req) {
    if (req.prompt.empty()) throw GatewayError(ErrorKind::config, "empty prompt");

    slots_.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{slots_};

    auto backoff = retry_.initial_backoff;
    auto t0 = std::chrono::steady_clock::now();
    for (int attempt = 1;; ++attempt) {
        try {
            LlmResponse res = backend_->complete(req);
            res.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0);
            return res;
        } catch (const GatewayError& e) {
            if (!e.retryable() || attempt >= retry_.max_attempts) throw;
            sleeper_(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long long>(static_cast<double>(backoff.count()) * retry_.multiplier));
        }
    }
}

LlmResponse LlmGateway::cached_complete(const LlmRequest& req, CacheStore& store) {
    const std::string key = CacheStore::request_key(req);
    if (auto hit = store.lookup(key)) {
        return {*hit, BackendKind::cache, std::chrono::milliseconds(0)};
    }
    LlmResponse res = complete(req);
    store.insert(key, res.text);
    return res;
}

}  // namespace fseg::llm
