#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include <json.hpp>

#include "commsuccess/errors.hpp"
#include "commsuccess/event.hpp"

namespace commsuccess {

// ---------------------------------------------------------------------------
// Line sources: plain istream or gzip file, picked by extension.
// ---------------------------------------------------------------------------

class LineSource {
  public:
    virtual ~LineSource() = default;
    virtual bool next(std::string& line) = 0;
};

class StreamLineSource final : public LineSource {
  public:
    explicit StreamLineSource(std::istream& in) : in_(in) {}
    bool next(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

  private:
    std::istream& in_;
};

class GzipLineSource final : public LineSource {
  public:
    explicit GzipLineSource(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw DataError("cannot open gzip file: " + path);
    }
    ~GzipLineSource() override {
        if (file_) gzclose(file_);
    }
    GzipLineSource(const GzipLineSource&) = delete;
    GzipLineSource& operator=(const GzipLineSource&) = delete;

    bool next(std::string& line) override {
        line.clear();
        char buf[1 << 14];
        for (;;) {
            if (gzgets(file_, buf, sizeof(buf)) == nullptr) return !line.empty();
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
        }
    }

  private:
    gzFile file_;
};

class FileLineSource final : public LineSource {
  public:
    explicit FileLineSource(const std::string& path) : in_(path) {
        if (!in_) throw DataError("cannot open file: " + path);
    }
    bool next(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

  private:
    std::ifstream in_;
};

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::unique_ptr<LineSource> open_line_source(const std::string& path) {
    if (has_suffix(path, ".zst"))
        throw ConfigError("zstd input is not supported in this build, decompress first: " + path);
    if (has_suffix(path, ".gz")) return std::make_unique<GzipLineSource>(path);
    return std::make_unique<FileLineSource>(path);
}

// ---------------------------------------------------------------------------
// Dump parsing (public Reddit dump schema, one JSON object per line).
// ---------------------------------------------------------------------------

enum class DumpKind { Posts, Comments };

inline DumpKind dump_kind_from_tag(const std::string& tag) {
    if (tag == "posts") return DumpKind::Posts;
    if (tag == "comments") return DumpKind::Comments;
    throw ConfigError("unknown dump format tag: " + tag);
}

struct StreamStats {
    std::size_t parsed = 0;
    std::size_t skipped = 0;  // malformed lines, counted not fatal
};

namespace detail {

inline std::int64_t parse_created_utc(const nlohmann::json& v) {
    if (v.is_number()) return static_cast<std::int64_t>(v.get<double>());
    if (v.is_string()) return static_cast<std::int64_t>(std::stod(v.get<std::string>()));
    throw DataError("created_utc is neither number nor string");
}

inline std::string get_string(const nlohmann::json& obj, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) throw DataError(std::string("missing field: ") + key);
        return {};
    }
    return it->get<std::string>();
}

inline long get_score(const nlohmann::json& obj) {
    auto it = obj.find("score");
    if (it == obj.end() || it->is_null()) return 0;
    if (it->is_number()) return static_cast<long>(it->get<double>());
    if (it->is_string()) return std::stol(it->get<std::string>());
    return 0;
}

}  // namespace detail

inline std::optional<Event> parse_dump_line(const std::string& line, DumpKind kind) {
    auto obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) return std::nullopt;
    try {
        Event e;
        e.id = detail::get_string(obj, "id", true);
        e.author = detail::get_string(obj, "author", true);
        e.community = detail::get_string(obj, "subreddit", true);
        e.created_at = detail::parse_created_utc(obj.at("created_utc"));
        e.score = detail::get_score(obj);
        if (kind == DumpKind::Posts) {
            e.kind = EventKind::Post;
            e.title = detail::get_string(obj, "title", true);
            e.body = detail::get_string(obj, "selftext", false);
        } else {
            e.kind = EventKind::Comment;
            e.parent_id = detail::get_string(obj, "parent_id", true);
            e.link_id = detail::get_string(obj, "link_id", false);
            e.body = detail::get_string(obj, "body", false);
        }
        if (e.created_at <= 0) return std::nullopt;
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Yields events in file order; malformed lines are skipped and counted.
inline StreamStats stream_events(LineSource& source, DumpKind kind,
                                 const std::function<void(Event&&)>& sink) {
    StreamStats stats;
    std::string line;
    while (source.next(line)) {
        if (line.empty()) continue;
        if (auto e = parse_dump_line(line, kind)) {
            sink(std::move(*e));
            ++stats.parsed;
        } else {
            ++stats.skipped;
        }
    }
    return stats;
}

inline StreamStats stream_events(std::istream& in, DumpKind kind,
                                 const std::function<void(Event&&)>& sink) {
    StreamLineSource src(in);
    return stream_events(src, kind, sink);
}

// ---------------------------------------------------------------------------
// Dump writing (synth output, same schema the reader accepts).
// ---------------------------------------------------------------------------

inline nlohmann::json event_to_dump_json(const Event& e) {
    nlohmann::json obj;
    obj["id"] = e.id;
    obj["author"] = e.author;
    obj["subreddit"] = e.community;
    obj["created_utc"] = e.created_at;
    obj["score"] = e.score;
    if (e.is_post()) {
        obj["title"] = e.title;
        obj["selftext"] = e.body;
    } else {
        obj["parent_id"] = e.parent_id;
        obj["link_id"] = e.link_id;
        obj["body"] = e.body;
    }
    return obj;
}

inline void write_dump(std::ostream& out, const std::vector<Event>& events, DumpKind kind) {
    for (const auto& e : events) {
        if ((kind == DumpKind::Posts) != e.is_post()) continue;
        out << event_to_dump_json(e).dump() << '\n';
    }
}

}  // namespace commsuccess
