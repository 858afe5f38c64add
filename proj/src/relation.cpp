#include "edcheck/relation.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace edcheck {

BitMatrix::BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

void BitMatrix::or_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = bits_.data() + dst * words_;
    const std::uint64_t* s = bits_.data() + src * words_;
    for (std::size_t w = 0; w < words_; ++w) d[w] |= s[w];
}

void BitMatrix::close() {
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i, k)) or_row(i, k);
}

bool BitMatrix::has_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
        if (test(i, i)) return true;
    return false;
}

void BitMatrix::add_closed(std::size_t i, std::size_t j) {
    if (test(i, j)) return;
    std::vector<std::uint64_t> add(bits_.begin() + j * words_, bits_.begin() + (j + 1) * words_);
    add[j >> 6] |= std::uint64_t{1} << (j & 63);
    for (std::size_t u = 0; u < n_; ++u) {
        if (u != i && !test(u, i)) continue;
        std::uint64_t* d = bits_.data() + u * words_;
        for (std::size_t w = 0; w < words_; ++w) d[w] |= add[w];
    }
}

BitMatrix closure_of(const Adjacency& g) {
    BitMatrix m(g.size());
    auto order = topo_order(g);
    if (order) {
        // reverse topological sweep is linear in edges times row width
        for (auto it = order->rbegin(); it != order->rend(); ++it) {
            int u = *it;
            for (int v : g[u]) {
                m.set(u, v);
                m.or_row(u, v);
            }
        }
        return m;
    }
    for (std::size_t u = 0; u < g.size(); ++u)
        for (int v : g[u]) m.set(u, v);
    m.close();
    return m;
}

std::optional<std::vector<int>> topo_order(const Adjacency& g) {
    const int n = static_cast<int>(g.size());
    std::vector<int> indeg(n, 0);
    for (const auto& out : g)
        for (int v : out) ++indeg[v];
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int u = ready.top();
        ready.pop();
        order.push_back(u);
        for (int v : g[u])
            if (--indeg[v] == 0) ready.push(v);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

bool is_acyclic(const Adjacency& g) {
    const int n = static_cast<int>(g.size());
    std::vector<int> indeg(n, 0);
    for (const auto& out : g)
        for (int v : out) ++indeg[v];
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++seen;
        for (int v : g[u])
            if (--indeg[v] == 0) stack.push_back(v);
    }
    return seen == n;
}

std::vector<int> shortest_cycle(const Adjacency& g) {
    const int n = static_cast<int>(g.size());
    // only nodes left after peeling sources and sinks can lie on a cycle
    std::vector<int> indeg(n, 0), outdeg(n, 0);
    std::vector<std::vector<int>> rev(n);
    for (int u = 0; u < n; ++u)
        for (int v : g[u]) {
            ++indeg[v];
            ++outdeg[u];
            rev[v].push_back(u);
        }
    std::vector<char> dead(n, 0);
    std::vector<int> work;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0 || outdeg[v] == 0) work.push_back(v);
    while (!work.empty()) {
        int u = work.back();
        work.pop_back();
        if (dead[u]) continue;
        dead[u] = 1;
        for (int v : g[u])
            if (!dead[v] && --indeg[v] == 0) work.push_back(v);
        for (int p : rev[u])
            if (!dead[p] && --outdeg[p] == 0) work.push_back(p);
    }

    std::vector<int> best;
    std::vector<int> dist(n), parent(n);
    for (int s = 0; s < n; ++s) {
        if (dead[s]) continue;
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        int closing = -1;
        while (!q.empty() && closing < 0) {
            int u = q.front();
            q.pop();
            if (!best.empty() && dist[u] + 1 >= static_cast<int>(best.size())) break;
            for (int v : g[u]) {
                if (dead[v]) continue;
                if (v == s) {
                    closing = u;
                    break;
                }
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push(v);
                }
            }
        }
        if (closing < 0) continue;
        std::vector<int> cyc;
        for (int v = closing; v != s; v = parent[v]) cyc.push_back(v);
        cyc.push_back(s);
        std::reverse(cyc.begin(), cyc.end());
        if (best.empty() || cyc.size() < best.size()) best = std::move(cyc);
        if (best.size() == 1) break;
    }
    return best;
}

void dedupe(Adjacency& g) {
    for (auto& out : g) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
}

}  // namespace edcheck
