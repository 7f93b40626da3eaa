#pragma once

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csphere/sha256.hpp"
#include "csphere/util.hpp"

namespace csphere {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Every CLI run writes one of these next to its outputs. Replaying a
// manifest re-executes the stored argv and compares output digests.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv;  // full invocation, for byte-exact replay
    nlohmann::json params;          // per-subcommand parameter echo
    double wall_ms = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["artifact_version"] = kArtifactVersion;
        j["subcommand"] = subcommand;
        j["argv"] = argv;
        j["params"] = params;
        j["wall_ms"] = wall_ms;
        auto arr = nlohmann::json::array();
        for (const auto& [path, digest] : outputs)
            arr.push_back({{"path", path}, {"sha256", digest}});
        j["outputs"] = arr;
        return j;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ComputationError("manifest: cannot write " + path);
        out << to_json().dump(2) << "\n";
    }

    static RunManifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("manifest: cannot open " + path);
        nlohmann::json j;
        in >> j;
        RunManifest m;
        m.subcommand = j.value("subcommand", "");
        m.argv = j.value("argv", std::vector<std::string>{});
        if (j.contains("params")) m.params = j["params"];
        m.wall_ms = j.value("wall_ms", 0.0);
        if (j.contains("outputs"))
            for (const auto& o : j["outputs"])
                m.outputs.emplace_back(o.value("path", ""), o.value("sha256", ""));
        return m;
    }
};

// CSV sink: '.' decimal, floats at 17 significant digits, with an optional
// JSON metadata header line ("# {...}").
class CsvFile {
public:
    explicit CsvFile(const std::string& path) : path_(path), out_(path) {
        if (!out_) throw ComputationError("csv: cannot write " + path);
    }

    void metadata(const nlohmann::json& j) { out_ << "# " << j.dump() << "\n"; }

    void header(const std::string& columns) { out_ << columns << "\n"; }

    CsvFile& field(const std::string& s) {
        sep();
        out_ << s;
        return *this;
    }
    CsvFile& field(double v) {
        sep();
        out_ << fmt_g17(v);
        return *this;
    }
    CsvFile& field(std::int64_t v) {
        sep();
        out_ << v;
        return *this;
    }
    void endrow() {
        out_ << "\n";
        row_started_ = false;
    }

    const std::string& path() const { return path_; }
    void close() { out_.close(); }

private:
    void sep() {
        if (row_started_) out_ << ",";
        row_started_ = true;
    }
    std::string path_;
    std::ofstream out_;
    bool row_started_ = false;
};

class WallClock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace csphere
