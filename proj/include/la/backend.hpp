#ifndef LA_BACKEND_HPP
#define LA_BACKEND_HPP

#include <memory>
#include <string>
#include <vector>

namespace la {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
};

struct RetryPolicy {
    int max_retries = 3;
    int base_delay_ms = 1000;
    int factor = 2;
};

struct BackendConfig {
    std::string kind = "mock";  // http-openai-compatible | mock
    std::string base_url;       // empty: LA_API_BASE, then api.openai.com/v1
    std::string api_key;
    std::string model = "mock";
    double temperature = 0.0;
    int timeout_s = 60;
    RetryPolicy retry;
    std::string mock_script_path;
};

// A chat-completion backend. Instances are cheaply clonable; eval workers
// clone one per record so a mock's script cursor is never shared.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
    virtual std::unique_ptr<Backend> clone() const = 0;
    virtual const std::string& model_name() const = 0;
};

// One scripted reply. Entries with a match key answer any request whose last
// user message starts with that prefix; unmatched requests consume unkeyed
// entries in file order.
struct MockEntry {
    std::string match;  // empty = ordinal entry
    std::string response;
};

std::vector<MockEntry> load_mock_script(const std::string& path);

std::unique_ptr<Backend> make_mock_backend(std::vector<MockEntry> script,
                                           std::string model = "mock");

// POSTs {base}/chat/completions with model/messages/temperature and reads
// choices[0].message.content. Retries transport errors, HTTP 429 and 5xx
// with exponential backoff (base 1s, factor 2, max 3 retries by default).
// Throws Error{"BackendExhausted"} or Error{"MalformedResponse"}.
std::unique_ptr<Backend> make_http_backend(const BackendConfig& config);

// Dispatches on config.kind; fills api-key/base-url/model from the
// LA_API_KEY / LA_API_BASE / LA_MODEL environment variables when unset.
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace la

#endif
