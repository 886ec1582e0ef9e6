#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vclab/network.hpp"
#include "vclab/pwl.hpp"
#include "vclab/rational.hpp"

namespace testing {

using vclab::Activation;
using vclab::Integer;
using vclab::Network;
using vclab::NetworkBuilder;
using vclab::NodeIndex;
using vclab::PwlFunction;
using vclab::Rational;

/// p/q with q in [1, max_den] and |p/q| <= bound.
inline Rational random_rational(std::mt19937_64& rng, long bound, long max_den = 6) {
    long q = std::uniform_int_distribution<long>(1, max_den)(rng);
    long p = std::uniform_int_distribution<long>(-bound * q, bound * q)(rng);
    return Rational(p, q);
}

inline PwlFunction random_pwl(std::mt19937_64& rng, std::size_t max_breakpoints = 5, bool continuous = false) {
    std::size_t count = std::uniform_int_distribution<std::size_t>(0, max_breakpoints)(rng);
    std::vector<Rational> bps;
    while (bps.size() < count) {
        Rational b = random_rational(rng, 5);
        if (std::find(bps.begin(), bps.end(), b) == bps.end()) bps.push_back(b);
    }
    std::sort(bps.begin(), bps.end());
    std::vector<vclab::Affine> pieces;
    pieces.push_back({random_rational(rng, 3), random_rational(rng, 3)});
    for (const auto& b : bps) {
        Rational slope = random_rational(rng, 3);
        Rational intercept = continuous ? pieces.back()(b) - slope * b : random_rational(rng, 3);
        pieces.push_back({slope, intercept});
    }
    return PwlFunction(bps, pieces);
}

/// Univariate ReLU network with 1..max_layers hidden layers of 1..max_width
/// units, full connections between consecutive layers plus random skip edges.
inline Network random_relu_net(std::mt19937_64& rng, int max_layers = 3, int max_width = 4, long weight_bound = 3) {
    NetworkBuilder nb(1);
    std::vector<std::vector<NodeIndex>> layers{{nb.input(0)}};
    int depth = std::uniform_int_distribution<int>(1, max_layers)(rng);
    std::bernoulli_distribution skip(0.3);
    for (int l = 1; l <= depth; ++l) {
        int width = std::uniform_int_distribution<int>(1, max_width)(rng);
        std::vector<NodeIndex> layer;
        for (int u = 0; u < width; ++u) {
            NodeIndex v = nb.add_unit("h" + std::to_string(l) + "_" + std::to_string(u), random_rational(rng, weight_bound),
                                      Activation::relu());
            for (NodeIndex s : layers.back()) nb.add_edge(s, v, random_rational(rng, weight_bound));
            for (std::size_t e = 0; e + 1 < layers.size(); ++e) {
                for (NodeIndex s : layers[e]) {
                    if (skip(rng)) nb.add_edge(s, v, random_rational(rng, weight_bound));
                }
            }
            layer.push_back(v);
        }
        layers.push_back(layer);
    }
    NodeIndex out = nb.add_unit("out", random_rational(rng, weight_bound), Activation::identity());
    for (NodeIndex s : layers.back()) nb.add_edge(s, out, random_rational(rng, weight_bound));
    return nb.build(out);
}

/// x -> relu(x) -> out, unit weights and zero biases.
inline Network one_hidden_relu() {
    NetworkBuilder nb(1);
    NodeIndex h = nb.add_unit("h", 0, Activation::relu());
    nb.add_edge(nb.input(0), h, 1);
    NodeIndex out = nb.add_unit("out", 0, Activation::identity());
    nb.add_edge(h, out, 1);
    return nb.build(out);
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("vclab-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace testing
