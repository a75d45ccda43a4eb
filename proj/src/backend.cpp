#include "la/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "la/error.hpp"

namespace la {

namespace {

using nlohmann::json;

class MockBackend final : public Backend {
public:
    MockBackend(std::vector<MockEntry> script, std::string model)
        : script_(std::make_shared<const std::vector<MockEntry>>(std::move(script))),
          model_(std::move(model)),
          consumed_(script_->size(), false) {}

    std::string complete(const std::vector<ChatMessage>& messages) override {
        ++calls_;
        std::string last_user;
        for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
            if (it->role == "user") {
                last_user = it->content;
                break;
            }
        }
        // Keyed entries win; unkeyed ones are consumed in file order.
        for (std::size_t i = 0; i < script_->size(); ++i) {
            const MockEntry& entry = (*script_)[i];
            if (consumed_[i] || entry.match.empty()) continue;
            if (last_user.rfind(entry.match, 0) == 0) {
                consumed_[i] = true;
                return entry.response;
            }
        }
        for (std::size_t i = 0; i < script_->size(); ++i) {
            if (consumed_[i] || !(*script_)[i].match.empty()) continue;
            consumed_[i] = true;
            return (*script_)[i].response;
        }
        throw Error("MockScriptExhausted",
                    "no scripted response left for request #" + std::to_string(calls_));
    }

    std::unique_ptr<Backend> clone() const override {
        auto copy = std::make_unique<MockBackend>(*this);
        copy->consumed_.assign(script_->size(), false);
        copy->calls_ = 0;
        return copy;
    }

    const std::string& model_name() const override { return model_; }

private:
    std::shared_ptr<const std::vector<MockEntry>> script_;
    std::string model_;
    std::vector<bool> consumed_;
    int calls_ = 0;
};

struct ParsedUrl {
    std::string host_port;  // scheme://host[:port] for httplib
    std::string path_prefix;
};

ParsedUrl split_base_url(const std::string& base) {
    const auto scheme_end = base.find("://");
    const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = base.find('/', host_start);
    if (path_start == std::string::npos) return {base, ""};
    std::string prefix = base.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base.substr(0, path_start), prefix};
}

class HttpBackend final : public Backend {
public:
    explicit HttpBackend(BackendConfig config) : config_(std::move(config)) {}

    std::string complete(const std::vector<ChatMessage>& messages) override {
        json body;
        body["model"] = config_.model;
        body["temperature"] = config_.temperature;
        body["messages"] = json::array();
        for (const ChatMessage& m : messages) {
            body["messages"].push_back({{"role", m.role}, {"content", m.content}});
        }
        const std::string payload = body.dump();

        const ParsedUrl url = split_base_url(config_.base_url);
        httplib::Client client(url.host_port);
        client.set_connection_timeout(config_.timeout_s, 0);
        client.set_read_timeout(config_.timeout_s, 0);
        if (!config_.api_key.empty()) {
            client.set_default_headers(
                {{"Authorization", "Bearer " + config_.api_key}});
        }

        const std::string route = url.path_prefix + "/chat/completions";
        std::string failure;
        for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
            if (attempt > 0) {
                int delay = config_.retry.base_delay_ms;
                for (int k = 1; k < attempt; ++k) delay *= config_.retry.factor;
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            }
            httplib::Result res = client.Post(route, payload, "application/json");
            if (!res) {
                failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw Error("BackendExhausted",
                            "HTTP " + std::to_string(res->status) + " from " + route +
                                " (not retryable)");
            }
            return extract_content(res->body);
        }
        throw Error("BackendExhausted",
                    "gave up after " + std::to_string(config_.retry.max_retries + 1) +
                        " attempts; last failure: " + failure);
    }

    std::unique_ptr<Backend> clone() const override {
        return std::make_unique<HttpBackend>(config_);
    }

    const std::string& model_name() const override { return config_.model; }

private:
    static std::string extract_content(const std::string& body) {
        json parsed = json::parse(body, nullptr, false);
        if (parsed.is_discarded()) {
            throw Error("MalformedResponse", "response body is not valid JSON");
        }
        if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty()) {
            throw Error("MalformedResponse", "response has no choices");
        }
        const json& msg = parsed["choices"][0];
        if (!msg.contains("message") || !msg["message"].contains("content") ||
            !msg["message"]["content"].is_string()) {
            throw Error("MalformedResponse", "choices[0].message.content missing");
        }
        return msg["message"]["content"].get<std::string>();
    }

    BackendConfig config_;
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value != nullptr && *value != '\0' ? value : fallback;
}

}  // namespace

std::vector<MockEntry> load_mock_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("IoError", "cannot open mock script '" + path + "'");
    }
    std::vector<MockEntry> script;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json entry = json::parse(line, nullptr, false);
        if (entry.is_discarded() || !entry.is_object() || !entry.contains("response") ||
            !entry["response"].is_string()) {
            throw Error("IoError", "mock script '" + path + "' line " +
                                       std::to_string(line_no) +
                                       ": expected {\"match\"?, \"response\"}");
        }
        MockEntry e;
        e.response = entry["response"].get<std::string>();
        if (entry.contains("match")) e.match = entry["match"].get<std::string>();
        script.push_back(std::move(e));
    }
    return script;
}

std::unique_ptr<Backend> make_mock_backend(std::vector<MockEntry> script,
                                           std::string model) {
    return std::make_unique<MockBackend>(std::move(script), std::move(model));
}

std::unique_ptr<Backend> make_http_backend(const BackendConfig& config) {
    return std::make_unique<HttpBackend>(config);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    if (config.kind == "mock") {
        if (config.mock_script_path.empty()) {
            throw Error("IoError", "mock backend requires a script path");
        }
        return make_mock_backend(load_mock_script(config.mock_script_path),
                                 config.model.empty() ? "mock" : config.model);
    }
    if (config.kind == "http-openai-compatible" || config.kind == "openai") {
        BackendConfig filled = config;
        if (filled.api_key.empty()) filled.api_key = env_or("LA_API_KEY", "");
        filled.base_url = filled.base_url.empty()
                              ? env_or("LA_API_BASE", "https://api.openai.com/v1")
                              : filled.base_url;
        if (filled.model.empty()) filled.model = env_or("LA_MODEL", "gpt-3.5-turbo");
        return make_http_backend(filled);
    }
    throw Error("IoError", "unknown backend kind '" + config.kind + "'");
}

}  // namespace la
