#pragma once

// In-image text resolution through a pluggable OCR provider, fronted by a
// content-addressed cache: <cache-dir>/ocr/<sha256-of-image>.txt

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "liwcad/digest.hpp"
#include "liwcad/ingest/records.hpp"
#include "liwcad/utf8.hpp"

namespace liwcad::ingest {

class OcrError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Image bytes in, UTF-8 text out. Throws OcrError on failure.
class OcrProvider {
public:
    virtual ~OcrProvider() = default;
    virtual std::string recognize(std::span<const std::byte> image) = 0;
};

class OcrCache {
public:
    explicit OcrCache(std::filesystem::path cache_dir) : dir_(std::move(cache_dir) / "ocr") {}

    std::filesystem::path path_for(std::string_view digest) const { return dir_ / (std::string(digest) + ".txt"); }

    std::optional<std::string> get(std::string_view digest) const {
        const auto path = path_for(digest);
        std::error_code ec;
        if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }

    // Write-then-rename so readers never see a partial file.
    void put(std::string_view digest, std::string_view text) const {
        std::filesystem::create_directories(dir_);
        const auto final_path = path_for(digest);
        auto tmp = final_path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(text.data(), static_cast<std::streamsize>(text.size()));
            if (!out) throw std::runtime_error("cannot write OCR cache entry " + tmp.string());
        }
        std::filesystem::rename(tmp, final_path);
    }

    // Serializes work per digest.
    std::unique_lock<std::mutex> lock(std::string_view digest) {
        std::mutex* m = nullptr;
        {
            std::lock_guard guard(table_mutex_);
            auto& slot = locks_[std::string(digest)];
            if (!slot) slot = std::make_unique<std::mutex>();
            m = slot.get();
        }
        return std::unique_lock<std::mutex>(*m);
    }

    const std::filesystem::path& directory() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    std::mutex table_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// Maps an image_ref to image bytes; nullopt when unavailable.
using ImageLoader = std::function<std::optional<std::string>(std::string_view image_ref)>;
using WarningSink = std::function<void(const std::string&)>;

inline ImageLoader file_image_loader(std::filesystem::path base_dir = {}) {
    return [base = std::move(base_dir)](std::string_view ref) -> std::optional<std::string> {
        std::filesystem::path p(ref);
        if (p.is_relative() && !base.empty()) p = base / p;
        std::ifstream in(p, std::ios::binary);
        if (!in) return std::nullopt;
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
}

inline WarningSink stderr_warnings() {
    return [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
}

// Fills in_image_text from the cache or a single provider call. Records that
// already carry in-image text, or carry no image_ref, pass through. Any
// failure leaves in_image_text absent and reports a warning.
inline AdRecord resolve_in_image_text(AdRecord record, OcrProvider& provider, OcrCache& cache,
                                      const ImageLoader& load_image, const WarningSink& warn = stderr_warnings()) {
    if (record.in_image_text || !record.image_ref) return record;

    const auto bytes = load_image(*record.image_ref);
    if (!bytes) {
        warn("ad " + record.ad_id + ": image '" + *record.image_ref + "' not readable; using main text only");
        return record;
    }
    const std::string digest = sha256_hex(*bytes);
    auto guard = cache.lock(digest);
    if (auto cached = cache.get(digest)) {
        record.in_image_text = std::move(*cached);
        return record;
    }
    try {
        std::string text =
            provider.recognize(std::span(reinterpret_cast<const std::byte*>(bytes->data()), bytes->size()));
        if (!utf8::is_valid(text)) throw OcrError("provider returned invalid UTF-8");
        cache.put(digest, text);
        record.in_image_text = std::move(text);
    } catch (const std::exception& e) {
        warn("ad " + record.ad_id + ": OCR failed (" + e.what() + "); using main text only");
    }
    return record;
}

}  // namespace liwcad::ingest
