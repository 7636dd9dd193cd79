// Strongly connected components of a directed graph, iterative Tarjan.
// Component ids are assigned in completion order, so every edge leads from
// a component of larger or equal id to one of smaller or equal id.

#pragma once

#include <algorithm>
#include <vector>

namespace sca::detail {

struct SccResult {
    std::vector<int> id; // per node, in [0, count)
    int count = 0;
};

inline SccResult strongly_connected_components(const std::vector<std::vector<int>>& adj)
{
    const int n = static_cast<int>(adj.size());
    SccResult res;
    res.id.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int next_index = 0;
    struct frame {
        int v;
        std::size_t pos;
    };
    std::vector<frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1)
            continue;
        call.push_back({root, 0});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!call.empty()) {
            frame& f = call.back();
            const auto& out = adj[static_cast<std::size_t>(f.v)];
            if (f.pos < out.size()) {
                const int w = out[f.pos++];
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
                }
                continue;
            }
            const int v = f.v;
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().v;
                low[static_cast<std::size_t>(parent)] =
                    std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
            }
            if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    res.id[static_cast<std::size_t>(w)] = res.count;
                    if (w == v)
                        break;
                }
                ++res.count;
            }
        }
    }
    return res;
}

} // namespace sca::detail
