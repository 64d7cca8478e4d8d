#ifndef BRKGA_DECODERS_HPP_
#define BRKGA_DECODERS_HPP_

#include <cstddef>
#include <vector>

#include "brkga/core.hpp"

namespace brkga {

/// Symmetric travelling salesman instance with an explicit distance matrix.
struct TspInstance {
    std::size_t n = 0;
    std::vector<double> dist; ///< row-major n x n

    double at(std::size_t i, std::size_t j) const { return dist[i * n + j]; }

    /// Square, zero diagonal, symmetric; throws std::invalid_argument otherwise.
    void validate() const;

    /// Builds the matrix from planar points: Euclidean lengths rounded
    /// half-up to the nearest integer.
    static TspInstance from_coords(const std::vector<std::pair<double, double>>& coords);
};

/**
 * Tour decoder: visits the cities in ascending key order (ties by index)
 * and minimizes the cyclic tour length. The canonical worked example: keys
 * (0.234, 0.876, 0.321, 0.693, 0.087) sort into the visiting sequence
 * 5-1-3-4-2 in 1-based city numbers.
 */
class TspDecoder : public Decoder {
public:
    explicit TspDecoder(TspInstance instance);

    Fitness decode(std::span<const double> keys) const override;
    std::vector<std::size_t> solution(std::span<const double> keys) const override;

    const TspInstance& instance() const { return instance_; }

private:
    TspInstance instance_;
};

/// 0/1 knapsack instance. Weights and values must be non-negative.
struct KnapsackInstance {
    std::size_t n = 0;
    double capacity = 0.0;
    std::vector<double> weight;
    std::vector<double> value;

    void validate() const;
};

/**
 * Greedy knapsack decoder: scans the items by descending key (ties by
 * index) and takes each item that still fits. Maximizes the packed value;
 * every decoded solution is feasible by construction.
 */
class KnapsackDecoder : public Decoder {
public:
    explicit KnapsackDecoder(KnapsackInstance instance);

    Fitness decode(std::span<const double> keys) const override;
    /// Selected item indices in ascending order.
    std::vector<std::size_t> solution(std::span<const double> keys) const override;

    const KnapsackInstance& instance() const { return instance_; }

private:
    KnapsackInstance instance_;
};

/// Knapsack with two value functions per item, both maximized under one
/// weight/capacity constraint.
struct BiKnapsackInstance {
    std::size_t n = 0;
    double capacity = 0.0;
    std::vector<double> weight;
    std::vector<double> value_a;
    std::vector<double> value_b;

    void validate() const;
};

/// Same greedy scan as KnapsackDecoder, emitting both packed values.
class BiKnapsackDecoder : public Decoder {
public:
    explicit BiKnapsackDecoder(BiKnapsackInstance instance);

    std::size_t num_objectives() const override { return 2; }
    Fitness decode(std::span<const double> keys) const override;
    std::vector<std::size_t> solution(std::span<const double> keys) const override;

    const BiKnapsackInstance& instance() const { return instance_; }

private:
    BiKnapsackInstance instance_;
};

/// Single-machine total tardiness instance: processing times and due dates.
struct SmttInstance {
    std::size_t n = 0;
    std::vector<double> ptime;
    std::vector<double> due;

    void validate() const;
};

/**
 * Schedule decoder: processes the jobs in ascending key order and minimizes
 * total tardiness sum(max(0, completion - due)).
 */
class SmttDecoder : public Decoder {
public:
    explicit SmttDecoder(SmttInstance instance);

    Fitness decode(std::span<const double> keys) const override;
    std::vector<std::size_t> solution(std::span<const double> keys) const override;

    const SmttInstance& instance() const { return instance_; }

private:
    SmttInstance instance_;
};

/// Chromosome whose ascending key order reproduces the given permutation:
/// position seq[j] receives key (j + 1) / (n + 1). Throws
/// std::invalid_argument unless seq is a permutation of 0..n-1.
Chromosome encode_permutation(const std::vector<std::size_t>& seq);

/// Chromosome a threshold decoder reads as the given selection: key 0.75
/// for selected positions, 0.25 elsewhere. Indices must be below n.
Chromosome encode_subset(const std::vector<std::size_t>& selected, std::size_t n);

} // namespace brkga

#endif // BRKGA_DECODERS_HPP_
