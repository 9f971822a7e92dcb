// Synthetic datasets shared by the integration tests and the acceptance
// runner: two planted user groups with their own vocabulary.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpd/graph_builder.hpp"
#include "vpd/metrics.hpp"

namespace fixture {

struct PlantedSpec {
    std::uint32_t group_size = 100;
    double p_intra = 0.05;
    std::int64_t min_weight = 2;
    std::int64_t max_weight = 4;
    std::uint32_t cross_edges = 5;
    std::uint32_t posts_per_user = 3;
};

struct Dataset {
    std::vector<vpd::Post> posts;
    std::vector<vpd::InteractionRecord> interactions;
    vpd::GroundTruth truth;
};

inline std::string user_name(int group, std::uint32_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%03u", group == 0 ? 'a' : 'b', i);
    return buf;
}

// Group A texts: 4 in 5 carry the marker "#greenwave"; 3 in 5 carry its
// companion "harbor" (always alongside the marker). Group B mirrors this
// with "#stayput" and "orchard". Both draw two filler words from a shared pool.
inline std::string planted_text(int group, std::size_t index, std::mt19937_64& rng) {
    static const char* const kFiller[] = {"river", "future", "people", "today", "debate", "country", "money"};
    const char* marker = group == 0 ? "#greenwave" : "#stayput";
    const char* companion = group == 0 ? "harbor" : "orchard";
    std::string text;
    const std::size_t slot = index % 5;
    if (slot != 0) text += std::string(marker) + " ";
    if (slot == 1 || slot == 2 || slot == 3) text += std::string(companion) + " ";
    text += kFiller[rng() % 7];
    text += " ";
    text += kFiller[rng() % 7];
    return text;
}

/// Two groups with intra-group edges of weight in [min_weight, max_weight]
/// and exactly `cross_edges` unit edges between them. Every edge of weight w
/// becomes w interaction records on posts of the receiving user.
inline Dataset planted_dataset(std::uint64_t seed, const PlantedSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    Dataset d;
    std::size_t text_index[2] = {0, 0};
    for (int g = 0; g < 2; ++g) {
        for (std::uint32_t i = 0; i < spec.group_size; ++i) {
            const std::string user = user_name(g, i);
            d.truth[user] = g == 0 ? "yes" : "no";
            for (std::uint32_t p = 0; p < spec.posts_per_user; ++p) {
                d.posts.push_back({user + "-p" + std::to_string(p), user, planted_text(g, text_index[g]++, rng)});
            }
        }
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> weight(spec.min_weight, spec.max_weight);
    std::size_t counter = 0;
    auto emit = [&](const std::string& u, const std::string& v, std::int64_t w) {
        for (std::int64_t r = 0; r < w; ++r) {
            // alternate directions; both count toward the same undirected pair
            const bool flip = (counter++ % 2) == 1;
            const std::string& sender = flip ? v : u;
            const std::string& receiver = flip ? u : v;
            const std::string post = receiver + "-p" + std::to_string(rng() % spec.posts_per_user);
            d.interactions.push_back({sender, post, receiver, vpd::InteractionKind::retweet, true});
        }
    };
    for (int g = 0; g < 2; ++g) {
        for (std::uint32_t i = 0; i < spec.group_size; ++i) {
            for (std::uint32_t j = i + 1; j < spec.group_size; ++j) {
                if (coin(rng) < spec.p_intra) emit(user_name(g, i), user_name(g, j), weight(rng));
            }
        }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cross;
    while (cross.size() < spec.cross_edges) {
        std::pair<std::uint32_t, std::uint32_t> e{static_cast<std::uint32_t>(rng() % spec.group_size),
                                                  static_cast<std::uint32_t>(rng() % spec.group_size)};
        if (std::find(cross.begin(), cross.end(), e) == cross.end()) cross.push_back(e);
    }
    for (const auto& [i, j] : cross) emit(user_name(0, i), user_name(1, j), 1);
    return d;
}

struct DatasetFiles {
    std::filesystem::path posts;
    std::filesystem::path interactions;
    std::filesystem::path truth;
};

inline DatasetFiles write_dataset(const Dataset& d, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    DatasetFiles f{dir / "posts.jsonl", dir / "interactions.jsonl", dir / "truth.csv"};
    std::ofstream posts(f.posts);
    for (const auto& p : d.posts) {
        posts << nlohmann::json{{"post_id", p.post_id}, {"author", p.author}, {"text", p.text}}.dump() << "\n";
    }
    std::ofstream inter(f.interactions);
    for (const auto& r : d.interactions) {
        inter << nlohmann::json{{"sender", r.sender}, {"post_id", r.post_id}, {"receiver", r.receiver},
                                {"kind", vpd::to_string(r.kind)}}
                     .dump()
              << "\n";
    }
    std::ofstream truth(f.truth);
    truth << "user,label\n";
    for (const auto& [user, label] : d.truth) truth << user << "," << label << "\n";
    return f;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("vpd-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace fixture
