#include "vlnsim/llm_planner.hpp"

#include <cstdlib>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace vlnsim {

namespace {

using nlohmann::json;

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw std::runtime_error("endpoint URL must include a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string build_chat_request(const LlmConfig& config, const std::string& prompt) {
    json body;
    body["model"] = config.model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    return body.dump();
}

std::string extract_chat_content(const std::string& response_body) {
    json j;
    try {
        j = json::parse(response_body);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("chat response is not valid JSON: ") + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        throw std::runtime_error("chat response has no choices");
    const json& msg = j["choices"][0].value("message", json::object());
    if (!msg.contains("content") || !msg["content"].is_string())
        throw std::runtime_error("chat response choice has no message content");
    return msg["content"].get<std::string>();
}

PlannerDecision LlmPlanner::next_action(const PlannerState& state, const TopoGraph& graph,
                                        const Episode& episode, const TopologyView& view) {
    PlannerDecision stop;
    std::string content;
    try {
        const SplitUrl url = split_url(config_.endpoint);
        httplib::Client client(url.origin);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);

        httplib::Headers headers;
        if (const char* token = std::getenv(config_.token_env.c_str()); token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);

        const std::string body = build_chat_request(config_, serialize_prompt(graph, episode, state, view));
        auto res = client.Post(url.path, headers, body, "application/json");
        if (!res) {
            stop.note = "llm request failed: " + httplib::to_string(res.error());
            return stop;
        }
        if (res->status != 200) {
            stop.note = "llm request returned status " + std::to_string(res->status);
            return stop;
        }
        content = extract_chat_content(res->body);
    } catch (const std::exception& e) {
        stop.note = std::string("llm request failed: ") + e.what();
        return stop;
    }
    return parse_decision(content, state.current_viewpoint, scene_);
}

}  // namespace vlnsim
