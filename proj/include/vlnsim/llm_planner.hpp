#pragma once

#include <string>

#include "vlnsim/planner.hpp"

namespace vlnsim {

// Chat-completion wire settings. The bearer token is read from the environment
// variable named in `token_env` so credentials never land in config files.
struct LlmConfig {
    std::string endpoint;              // e.g. http://localhost:8089/v1/chat/completions
    std::string model = "local";
    std::string token_env = "VLNSIM_LLM_TOKEN";
    int timeout_seconds = 30;
};

// Builds the {model, messages:[{role, content}]} request body for a prompt.
std::string build_chat_request(const LlmConfig& config, const std::string& prompt);

// Pulls choices[0].message.content out of a chat-completion response; throws
// std::runtime_error when the shape is wrong.
std::string extract_chat_content(const std::string& response_body);

// Planner backed by an HTTP chat-completion endpoint. One request per decision;
// any transport or parse failure degrades to Stop with a diagnostic note, so a
// sweep never crashes on a flaky endpoint.
class LlmPlanner final : public Planner {
public:
    LlmPlanner(LlmConfig config, const Scene& scene) : config_(std::move(config)), scene_(scene) {}

    PlannerDecision next_action(const PlannerState& state, const TopoGraph& graph,
                                const Episode& episode, const TopologyView& view) override;

private:
    LlmConfig config_;
    const Scene& scene_;
};

}  // namespace vlnsim
