#include <httplib.h>

#include "logkg/error.hpp"
#include "logkg/llm_runner.hpp"

namespace logkg {

namespace {

class HttplibTransport : public HttpTransport {
public:
    HttpResponse post_json(const std::string& url, const std::string& body,
                           const std::vector<std::pair<std::string, std::string>>& headers,
                           std::chrono::milliseconds timeout) override {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw ProviderError("endpoint has no scheme: " + url, false);
        auto path_start = url.find('/', scheme_end + 3);
        std::string origin = url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());

        httplib::Headers h;
        for (const auto& [k, v] : headers) h.emplace(k, v);
        auto res = client.Post(path, h, body, "application/json");
        if (!res) throw ProviderError("request failed: " + httplib::to_string(res.error()), true);
        return {res->status, res->body};
    }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

}  // namespace logkg
