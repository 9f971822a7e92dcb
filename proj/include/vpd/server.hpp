#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "vpd/snapshot.hpp"

namespace httplib {
class Server;
}

namespace vpd {

struct ApiResponse {
    int status = 200;
    std::string body;
};

/// Request handling over an immutable snapshot, independent of the HTTP
/// transport. All bodies are JSON; errors are `{"error": "..."}`.
class ApiService {
public:
    explicit ApiService(Snapshot snapshot);

    ApiResponse get(std::string_view path, const std::map<std::string, std::string>& query = {}) const;
    ApiResponse post(std::string_view path, std::string_view body) const;

    const Snapshot& snapshot() const noexcept { return snapshot_; }

    static constexpr std::size_t kDefaultSampleNodes = 2000;

private:
    ApiResponse meta() const;
    ApiResponse sweep() const;
    ApiResponse partition(const std::string& k) const;
    ApiResponse selection() const;
    ApiResponse viewpoint_terms(const std::string& viewpoint,
                                const std::map<std::string, std::string>& query) const;
    ApiResponse graph_sample(const std::map<std::string, std::string>& query) const;
    ApiResponse drill(const std::string& viewpoint, std::string_view body) const;

    Snapshot snapshot_;
};

struct ServerOptions {
    /// Adds Access-Control-Allow-Origin: * to every response.
    bool allow_any_origin = false;
    /// Static files mounted at "/" when non-empty.
    std::string static_dir;
};

/// cpp-httplib front end for an ApiService.
class ApiServer {
public:
    ApiServer(const ApiService& service, ServerOptions options = {});
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds to host:port (port 0 picks a free port); returns the bound port
    /// or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();
    bool running() const;

private:
    const ApiService& service_;
    std::unique_ptr<httplib::Server> http_;
};

}  // namespace vpd
