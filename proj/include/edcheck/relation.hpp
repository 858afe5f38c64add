#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace edcheck {

using Adjacency = std::vector<std::vector<int>>;

// Square boolean matrix with 64-bit packed rows.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n);

    std::size_t size() const { return n_; }
    bool test(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
    }
    void set(std::size_t i, std::size_t j) {
        bits_[i * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
    }
    void or_row(std::size_t dst, std::size_t src);
    // Warshall over packed rows.
    void close();
    bool has_diagonal() const;
    // Adds i->j and keeps the matrix transitively closed (assumes it was).
    void add_closed(std::size_t i, std::size_t j);

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

BitMatrix closure_of(const Adjacency& g);

// Kahn's algorithm, always taking the smallest ready node; nullopt on a cycle.
std::optional<std::vector<int>> topo_order(const Adjacency& g);

bool is_acyclic(const Adjacency& g);

// Shortest cycle (as node list) found by BFS from every node; empty if acyclic.
std::vector<int> shortest_cycle(const Adjacency& g);

void dedupe(Adjacency& g);

}  // namespace edcheck
