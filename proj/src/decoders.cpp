#include "brkga/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace brkga {

namespace {

void require_length(std::span<const double> keys, std::size_t n, const char* who) {
    if (keys.size() != n)
        throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(n) +
                                    " keys, got " + std::to_string(keys.size()));
}

// Item indices by descending key, ties by index.
std::vector<std::size_t> descending_order(std::span<const double> keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [keys](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    return order;
}

std::vector<std::size_t> greedy_pack(std::span<const double> keys,
                                     const std::vector<double>& weight,
                                     double capacity) {
    std::vector<std::size_t> chosen;
    double remaining = capacity;
    for (std::size_t item : descending_order(keys)) {
        if (weight[item] <= remaining) {
            chosen.push_back(item);
            remaining -= weight[item];
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace

void TspInstance::validate() const {
    if (n < 2)
        throw std::invalid_argument("TspInstance: need at least two cities");
    if (dist.size() != n * n)
        throw std::invalid_argument("TspInstance: distance matrix is not n x n");
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            throw std::invalid_argument("TspInstance: diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j)
            if (at(i, j) != at(j, i))
                throw std::invalid_argument("TspInstance: distance matrix is asymmetric");
    }
}

TspInstance TspInstance::from_coords(const std::vector<std::pair<double, double>>& coords) {
    TspInstance instance;
    instance.n = coords.size();
    instance.dist.assign(instance.n * instance.n, 0.0);
    for (std::size_t i = 0; i < instance.n; ++i)
        for (std::size_t j = i + 1; j < instance.n; ++j) {
            const double dx = coords[i].first - coords[j].first;
            const double dy = coords[i].second - coords[j].second;
            // Euclidean length rounded half-up to the nearest integer.
            const double d = std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
            instance.dist[i * instance.n + j] = d;
            instance.dist[j * instance.n + i] = d;
        }
    return instance;
}

TspDecoder::TspDecoder(TspInstance instance) : instance_(std::move(instance)) {
    instance_.validate();
}

Fitness TspDecoder::decode(std::span<const double> keys) const {
    require_length(keys, instance_.n, "TspDecoder");
    const std::vector<std::size_t> tour = ascending_order(keys);
    double length = 0.0;
    for (std::size_t i = 0; i < tour.size(); ++i)
        length += instance_.at(tour[i], tour[(i + 1) % tour.size()]);
    return Fitness{{length}, {Sense::MINIMIZE}};
}

std::vector<std::size_t> TspDecoder::solution(std::span<const double> keys) const {
    require_length(keys, instance_.n, "TspDecoder");
    return ascending_order(keys);
}

void KnapsackInstance::validate() const {
    if (n < 1)
        throw std::invalid_argument("KnapsackInstance: need at least one item");
    if (weight.size() != n || value.size() != n)
        throw std::invalid_argument("KnapsackInstance: need one weight and value per item");
    if (capacity < 0.0)
        throw std::invalid_argument("KnapsackInstance: capacity must be non-negative");
    for (std::size_t i = 0; i < n; ++i)
        if (weight[i] < 0.0 || value[i] < 0.0)
            throw std::invalid_argument("KnapsackInstance: weights and values must be >= 0");
}

KnapsackDecoder::KnapsackDecoder(KnapsackInstance instance) : instance_(std::move(instance)) {
    instance_.validate();
}

Fitness KnapsackDecoder::decode(std::span<const double> keys) const {
    require_length(keys, instance_.n, "KnapsackDecoder");
    double total = 0.0;
    for (std::size_t item : greedy_pack(keys, instance_.weight, instance_.capacity))
        total += instance_.value[item];
    return Fitness{{total}, {Sense::MAXIMIZE}};
}

std::vector<std::size_t> KnapsackDecoder::solution(std::span<const double> keys) const {
    require_length(keys, instance_.n, "KnapsackDecoder");
    return greedy_pack(keys, instance_.weight, instance_.capacity);
}

void BiKnapsackInstance::validate() const {
    if (n < 1)
        throw std::invalid_argument("BiKnapsackInstance: need at least one item");
    if (weight.size() != n || value_a.size() != n || value_b.size() != n)
        throw std::invalid_argument("BiKnapsackInstance: need weight and both values per item");
    if (capacity < 0.0)
        throw std::invalid_argument("BiKnapsackInstance: capacity must be non-negative");
    for (std::size_t i = 0; i < n; ++i)
        if (weight[i] < 0.0 || value_a[i] < 0.0 || value_b[i] < 0.0)
            throw std::invalid_argument("BiKnapsackInstance: weights and values must be >= 0");
}

BiKnapsackDecoder::BiKnapsackDecoder(BiKnapsackInstance instance)
    : instance_(std::move(instance)) {
    instance_.validate();
}

Fitness BiKnapsackDecoder::decode(std::span<const double> keys) const {
    require_length(keys, instance_.n, "BiKnapsackDecoder");
    double total_a = 0.0;
    double total_b = 0.0;
    for (std::size_t item : greedy_pack(keys, instance_.weight, instance_.capacity)) {
        total_a += instance_.value_a[item];
        total_b += instance_.value_b[item];
    }
    return Fitness{{total_a, total_b}, {Sense::MAXIMIZE, Sense::MAXIMIZE}};
}

std::vector<std::size_t> BiKnapsackDecoder::solution(std::span<const double> keys) const {
    require_length(keys, instance_.n, "BiKnapsackDecoder");
    return greedy_pack(keys, instance_.weight, instance_.capacity);
}

void SmttInstance::validate() const {
    if (n < 1)
        throw std::invalid_argument("SmttInstance: need at least one job");
    if (ptime.size() != n || due.size() != n)
        throw std::invalid_argument("SmttInstance: need one processing time and due date per job");
    for (std::size_t i = 0; i < n; ++i)
        if (ptime[i] < 0.0 || due[i] < 0.0)
            throw std::invalid_argument("SmttInstance: times and due dates must be >= 0");
}

SmttDecoder::SmttDecoder(SmttInstance instance) : instance_(std::move(instance)) {
    instance_.validate();
}

Fitness SmttDecoder::decode(std::span<const double> keys) const {
    require_length(keys, instance_.n, "SmttDecoder");
    double clock = 0.0;
    double tardiness = 0.0;
    for (std::size_t job : ascending_order(keys)) {
        clock += instance_.ptime[job];
        tardiness += std::max(0.0, clock - instance_.due[job]);
    }
    return Fitness{{tardiness}, {Sense::MINIMIZE}};
}

std::vector<std::size_t> SmttDecoder::solution(std::span<const double> keys) const {
    require_length(keys, instance_.n, "SmttDecoder");
    return ascending_order(keys);
}

Chromosome encode_permutation(const std::vector<std::size_t>& seq) {
    const std::size_t n = seq.size();
    if (n == 0)
        throw std::invalid_argument("encode_permutation: empty sequence");
    std::vector<bool> seen(n, false);
    for (std::size_t pos : seq) {
        if (pos >= n || seen[pos])
            throw std::invalid_argument("encode_permutation: not a permutation of 0..n-1");
        seen[pos] = true;
    }
    Chromosome keys(n);
    for (std::size_t j = 0; j < n; ++j)
        keys[seq[j]] = static_cast<double>(j + 1) / static_cast<double>(n + 1);
    return keys;
}

Chromosome encode_subset(const std::vector<std::size_t>& selected, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("encode_subset: n must be positive");
    Chromosome keys(n, 0.25);
    for (std::size_t idx : selected) {
        if (idx >= n)
            throw std::invalid_argument("encode_subset: index out of range");
        keys[idx] = 0.75;
    }
    return keys;
}

} // namespace brkga
